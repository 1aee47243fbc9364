"""
场景路径与滤波路径

两者都是网格对齐的不可变记录，数组字段在构造后不应被修改。
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from .params import ModelParams

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int8]


@dataclass(frozen=True)
class ScenarioPath:
    """一个模拟世界

    Attributes:
        grid: 时间网格 0 = t_0 < ... < t_N = T_sim，含精确插入的 ξ 与 τ 节点
        xi: 变点时刻 ξ（精确值，不对齐网格）
        theta: 单位指数水平 Θ
        tau: 违约时刻 τ（精确值，可能超过 T_sim）
        brownian: 网格点上的 B_t
        y_obs: 网格点上的观测 Y_t
        h_ind: 违约指示 H_t = 1{τ ≤ t}
        mu_path: 网格点上的风险率 μ_t
        seed: 生成该场景的种子，手工构造时为 None
    """

    grid: FloatArray
    xi: float
    theta: float
    tau: float
    brownian: FloatArray
    y_obs: FloatArray
    h_ind: IntArray
    mu_path: FloatArray
    seed: Optional[int] = None

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    @property
    def n_steps(self) -> int:
        return len(self.grid) - 1

    @property
    def tau_index(self) -> Optional[int]:
        """τ 所在网格节点的下标；τ 超出模拟区间时为 None，τ 在区间内但不是节点时为 -1"""
        if not (0.0 < self.tau <= self.horizon):
            return None
        idx = int(np.searchsorted(self.grid, self.tau))
        if idx < len(self.grid) and self.grid[idx] == self.tau:
            return idx
        return -1


@dataclass(frozen=True)
class FilterPath:
    """与场景网格对齐的滤波轨迹

    pi_g 为 G^Y 滤波，pi_f 为 F^Y 滤波，二者可只有其一。
    tau_index / pi_tau_minus 记录违约节点及跳跃前的 Π_{τ−}。
    """

    params: ModelParams
    grid: FloatArray
    scheme: str
    pi_g: Optional[FloatArray] = None
    pi_f: Optional[FloatArray] = None
    tau_index: Optional[int] = None
    pi_tau_minus: Optional[float] = None

    @property
    def mu_hat_g(self) -> Optional[FloatArray]:
        """μ̂ = μ1 + Δμ·Π"""
        if self.pi_g is None:
            return None
        return self.params.mu1 + self.params.delta_mu * self.pi_g

    @property
    def mu_hat_f(self) -> Optional[FloatArray]:
        """μ̂^F = μ1 + Δμ·Π^F"""
        if self.pi_f is None:
            return None
        return self.params.mu1 + self.params.delta_mu * self.pi_f

    def merge(self, other: "FilterPath") -> "FilterPath":
        """合并两条同网格轨迹，缺失的一侧由 other 补齐"""
        if len(self.grid) != len(other.grid) or not np.array_equal(self.grid, other.grid):
            raise ValueError("两条滤波轨迹的网格不一致")
        return FilterPath(
            params=self.params,
            grid=self.grid,
            scheme=self.scheme if self.pi_g is not None else other.scheme,
            pi_g=self.pi_g if self.pi_g is not None else other.pi_g,
            pi_f=self.pi_f if self.pi_f is not None else other.pi_f,
            tau_index=self.tau_index if self.tau_index is not None else other.tau_index,
            pi_tau_minus=self.pi_tau_minus if self.pi_tau_minus is not None else other.pi_tau_minus,
        )


__all__ = ["ScenarioPath", "FilterPath", "FloatArray", "IntArray"]
