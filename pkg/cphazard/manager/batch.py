"""
向量化批量模拟引擎

一批路径共享均匀网格；每个均匀步每条路径只抽一个正态增量。
若 ξ 或 τ 落在某一步内部，用布朗桥把该步的增量拆到至多三个子步上，
观测漂移在 ξ 处切换，跳跃精确施加在 τ 处。

随机流分工：latent 抽 (ξ, Θ)，main 抽均匀步增量，bridge 抽桥上的条件增量。
参数不同的变体使用同一组随机流时，均匀步增量完全一致。
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.filters import clamp_array, clamped_jump, continuous_increment
from ..core.model import invert_hazard, uniform_grid
from ..models.params import ModelParams
from ..models.paths import FloatArray

# 节点时刻与目标时刻比较时的容差
_TIME_TOL = 1e-12


@dataclass(frozen=True)
class BatchOutput:
    """一批路径在指定时刻的取值

    Attributes:
        xi, theta, tau: 每条路径的潜变量
        record_times: 实际取值的网格节点时刻（不小于请求时刻的第一个节点）
        pi_g, pi_f, h: 形状 (时刻数, 路径数)
        path_pi_g: 形状 (倍数个数, 路径数)，在 ξ 的倍数时刻取值
        trace_times, traces: 前若干条路径的 Π 轨迹
    """

    xi: FloatArray
    theta: FloatArray
    tau: FloatArray
    record_times: FloatArray
    pi_g: FloatArray
    pi_f: Optional[FloatArray]
    h: FloatArray
    path_pi_g: FloatArray
    trace_times: FloatArray
    traces: FloatArray


def draw_latent(params: ModelParams, rng: np.random.Generator, size: int) -> Tuple[FloatArray, FloatArray]:
    """批量抽取 (ξ, Θ)"""
    atom = rng.random(size) < params.pi0
    waiting = rng.exponential(1.0 / params.lam, size)
    theta = rng.exponential(1.0, size)
    return np.where(atom, 0.0, waiting), theta


def _bridge_split(
    t0: float, t1: float, e1: FloatArray, e2: FloatArray, total: FloatArray, z1: FloatArray, z2: FloatArray
) -> List[FloatArray]:
    """在 t0 < e1 ≤ e2 ≤ t1 处依次条件化布朗桥，返回三个子步增量"""
    h = t1 - t0
    b1 = (e1 - t0) / h * total + np.sqrt(np.maximum((e1 - t0) * (t1 - e1) / h, 0.0)) * z1
    rest = t1 - e1
    safe_rest = np.where(rest > 0.0, rest, 1.0)
    frac = np.where(rest > 0.0, (e2 - e1) / safe_rest, 0.0)
    var = np.where(rest > 0.0, np.maximum((e2 - e1) * (t1 - e2) / safe_rest, 0.0), 0.0)
    b2 = b1 + frac * (total - b1) + np.sqrt(var) * z2
    return [b1, b2 - b1, total - b2]


class BatchSimulator:
    """在一批路径上同时积分 G^Y 与（可选的）F^Y 滤波"""

    def __init__(
        self,
        params: ModelParams,
        horizon: float,
        dt: float,
        with_f: bool = False,
        milstein: bool = False,
        full_bridge: bool = False,
    ) -> None:
        self.params = params
        self.grid = uniform_grid(horizon, dt)
        self.with_f = with_f
        self.milstein = milstein
        # 每步为所有路径抽桥增量，使变体间的桥随机数也一一对应
        self.full_bridge = full_bridge

    def _record_index(self, record_times: Sequence[float]) -> List[int]:
        indices = []
        for time in record_times:
            idx = int(np.searchsorted(self.grid, time - _TIME_TOL))
            if idx >= len(self.grid):
                raise ValueError(f"取值时刻 {time} 超出模拟区间 {self.grid[-1]}")
            indices.append(idx)
        return indices

    def run(
        self,
        size: int,
        rngs: Sequence[np.random.Generator],
        record_times: Sequence[float] = (),
        xi_multiples: Sequence[float] = (),
        latent: Optional[Tuple[float, float]] = None,
        trace_paths: int = 0,
        trace_stride: int = 1,
    ) -> BatchOutput:
        """模拟 size 条路径

        Args:
            size: 路径数
            rngs: (latent, main, bridge) 三条随机流
            record_times: 固定取值时刻
            xi_multiples: 以 ξ 的倍数给出的逐路径取值时刻
            latent: 给定时所有路径共用同一个 (ξ, Θ)
            trace_paths: 记录完整轨迹的路径数
            trace_stride: 轨迹每隔多少个节点记录一次
        """
        params = self.params
        rng_latent, rng_main, rng_bridge = rngs
        if latent is None:
            xi, theta = draw_latent(params, rng_latent, size)
        else:
            xi = np.full(size, float(latent[0]))
            theta = np.full(size, float(latent[1]))
        tau = np.asarray(invert_hazard(params.mu1, params.mu2, xi, theta), dtype=np.float64)

        grid = self.grid
        record_idx = self._record_index(record_times)
        rec_g = np.empty((len(record_idx), size))
        rec_f = np.empty((len(record_idx), size)) if self.with_f else None
        rec_h = np.empty((len(record_idx), size))

        targets = xi[None, :] * np.asarray(xi_multiples, dtype=np.float64)[:, None]
        path_values = np.full(targets.shape, np.nan)
        pending = np.ones(targets.shape, dtype=bool)

        n_trace = min(trace_paths, size)
        trace_nodes = list(range(0, len(grid), max(1, trace_stride)))
        if trace_nodes[-1] != len(grid) - 1:
            trace_nodes.append(len(grid) - 1)
        trace_set = {node: row for row, node in enumerate(trace_nodes)}
        traces = np.empty((len(trace_nodes), n_trace))

        pi_g = np.full(size, float(params.pi0))
        pi_f = np.full(size, float(params.pi0))
        dead = np.zeros(size)

        def capture(k: int) -> None:
            for row, idx in enumerate(record_idx):
                if idx == k:
                    rec_g[row] = pi_g
                    rec_h[row] = dead
                    if rec_f is not None:
                        rec_f[row] = pi_f
            if targets.size:
                hit = pending & (grid[k] >= targets - _TIME_TOL)
                if hit.any():
                    path_values[hit] = np.broadcast_to(pi_g, targets.shape)[hit]
                    pending[hit] = False
            if n_trace and k in trace_set:
                traces[trace_set[k]] = pi_g[:n_trace]

        capture(0)
        for k in range(len(grid) - 1):
            t0, t1 = float(grid[k]), float(grid[k + 1])
            h = t1 - t0
            d_b = rng_main.standard_normal(size) * np.sqrt(h)

            post = (xi <= t0).astype(np.float64)
            d_y = params.delta_mu * post * h + params.beta * d_b
            new_g = clamp_array(pi_g, continuous_increment(params, pi_g, d_y, h, 1.0 - dead, self.milstein))
            new_f = pi_f
            if self.with_f:
                new_f = clamp_array(pi_f, continuous_increment(params, pi_f, d_y, h, 0.0, self.milstein))

            xi_inside = (xi > t0) & (xi < t1)
            tau_inside = (tau > t0) & (tau <= t1)
            special = xi_inside | tau_inside
            if self.full_bridge:
                z_all = rng_bridge.standard_normal((2, size))
            if special.any():
                idx = np.nonzero(special)[0]
                if self.full_bridge:
                    z1, z2 = z_all[0, idx], z_all[1, idx]
                else:
                    z1, z2 = rng_bridge.standard_normal((2, idx.size))
                g_sub, f_sub, dead_sub = self._split_step(
                    t0, t1, xi[idx], tau[idx], xi_inside[idx], tau_inside[idx], d_b[idx], z1, z2,
                    pi_g[idx], pi_f[idx], dead[idx],
                )
                new_g[idx] = g_sub
                if self.with_f:
                    new_f[idx] = f_sub
                dead[idx] = dead_sub

            pi_g = new_g
            pi_f = new_f
            capture(k + 1)

        return BatchOutput(
            xi=xi,
            theta=theta,
            tau=tau,
            record_times=grid[record_idx] if record_idx else np.empty(0),
            pi_g=rec_g,
            pi_f=rec_f,
            h=rec_h,
            path_pi_g=path_values,
            trace_times=grid[trace_nodes],
            traces=traces,
        )

    def _split_step(
        self,
        t0: float,
        t1: float,
        xi: FloatArray,
        tau: FloatArray,
        xi_inside: np.ndarray,
        tau_inside: np.ndarray,
        total: FloatArray,
        z1: FloatArray,
        z2: FloatArray,
        pi_g: FloatArray,
        pi_f: FloatArray,
        dead: FloatArray,
    ) -> Tuple[FloatArray, FloatArray, FloatArray]:
        """含事件的步：按 ξ、τ 拆成子步依次积分"""
        params = self.params
        first = np.where(xi_inside, xi, t1)
        second = np.where(tau_inside, tau, t1)
        e1 = np.minimum(first, second)
        e2 = np.maximum(first, second)
        pieces = _bridge_split(t0, t1, e1, e2, total, z1, z2)
        bounds = [(np.full_like(e1, t0), e1), (e1, e2), (e2, np.full_like(e1, t1))]

        pi_g = pi_g.copy()
        pi_f = pi_f.copy()
        dead = dead.copy()
        for (s0, s1), d_b in zip(bounds, pieces):
            length = s1 - s0
            active = length > 0.0
            safe = np.where(active, length, 1.0)
            d_y = params.delta_mu * (xi <= s0) * safe + params.beta * d_b
            cand_g = clamp_array(pi_g, continuous_increment(params, pi_g, d_y, safe, 1.0 - dead, self.milstein))
            pi_g = np.where(active, cand_g, pi_g)
            if self.with_f:
                cand_f = clamp_array(pi_f, continuous_increment(params, pi_f, d_y, safe, 0.0, self.milstein))
                pi_f = np.where(active, cand_f, pi_f)
            default_now = tau_inside & active & (tau == s1) & (dead == 0.0)
            pi_g = np.where(default_now, clamped_jump(params, pi_g), pi_g)
            dead = np.where(default_now, 1.0, dead)
        return pi_g, pi_f, dead
