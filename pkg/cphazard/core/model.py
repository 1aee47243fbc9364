"""
模型核心：变点、违约时刻与观测过程的精确模拟

τ 通过分段线性累计风险率的解析反演得到，ξ 与 τ 作为额外节点
精确插入均匀网格，观测漂移在 ξ 处切换。
"""

import math
from typing import Optional, Union

import numpy as np

from ..config.logging_config import get_logger
from ..models.params import ModelParams
from ..models.paths import FloatArray, ScenarioPath
from .exceptions import DomainError

logger = get_logger(__name__)

ArrayLike = Union[float, FloatArray]


def derive_seed(seed: int, index: int) -> int:
    """由根种子和计数器派生子种子，结果与派生总数无关"""
    state = np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def sample_change_point(params: ModelParams, rng: np.random.Generator) -> float:
    """抽样 ξ：以概率 π 取 0，否则服从 Exp(λ)"""
    if rng.random() < params.pi0:
        return 0.0
    return float(rng.exponential(1.0 / params.lam))


def cumulative_hazard(params: ModelParams, xi: float, t: float) -> float:
    """Λ_t = ∫_0^t μ_s ds"""
    if t < 0.0:
        raise DomainError("t", f"时刻不能为负: {t}")
    if xi < 0.0:
        raise DomainError("xi", f"变点不能为负: {xi}")
    if t < xi:
        return params.mu1 * t
    return params.mu1 * xi + params.mu2 * (t - xi)


def invert_hazard(mu1: float, mu2: float, xi: ArrayLike, theta: ArrayLike) -> ArrayLike:
    """Λ 的反函数，标量与数组通用"""
    pre = np.asarray(theta) <= mu1 * np.asarray(xi)
    result = np.where(pre, np.asarray(theta) / mu1, np.asarray(xi) + (np.asarray(theta) - mu1 * np.asarray(xi)) / mu2)
    if np.ndim(result) == 0:
        return float(result)
    return result


def sample_default_time(params: ModelParams, xi: float, theta: float) -> float:
    """τ = inf{t ≥ 0 : Λ_t ≥ Θ}"""
    if not theta > 0.0:
        raise DomainError("theta", f"Θ 必须为正: {theta}")
    if xi < 0.0:
        raise DomainError("xi", f"变点不能为负: {xi}")
    if theta <= params.mu1 * xi:
        return theta / params.mu1
    return xi + (theta - params.mu1 * xi) / params.mu2


def uniform_grid(horizon: float, dt: float) -> FloatArray:
    """步长 dt 的均匀网格，末节点精确等于 horizon"""
    n_steps = max(1, int(math.ceil(horizon / dt - 1e-9)))
    grid = np.arange(n_steps + 1, dtype=np.float64) * dt
    grid[-1] = horizon
    return grid


def _check_horizon(horizon: float, dt: float) -> None:
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise DomainError("horizon", f"模拟区间必须为正: {horizon}")
    if not (math.isfinite(dt) and 0.0 < dt <= horizon):
        raise DomainError("dt", f"步长必须位于 (0, horizon]: {dt}")


def build_scenario(
    params: ModelParams,
    grid: FloatArray,
    xi: float,
    theta: float,
    tau: float,
    brownian: FloatArray,
    seed: Optional[int] = None,
) -> ScenarioPath:
    """由网格上的布朗路径和潜变量组装场景，观测增量按 ξ 分段精确计算"""
    post_change = grid >= xi
    mu_path = np.where(post_change, params.mu2, params.mu1)
    dt = np.diff(grid)
    d_b = np.diff(brownian)
    d_y = params.delta_mu * post_change[:-1] * dt + params.beta * d_b
    y_obs = np.concatenate(([0.0], np.cumsum(d_y)))
    h_ind = (grid >= tau).astype(np.int8)
    return ScenarioPath(
        grid=grid,
        xi=float(xi),
        theta=float(theta),
        tau=float(tau),
        brownian=brownian,
        y_obs=y_obs,
        h_ind=h_ind,
        mu_path=mu_path,
        seed=seed,
    )


def simulate_scenario(
    params: ModelParams,
    horizon: float,
    dt: float,
    rng: np.random.Generator,
    seed: Optional[int] = None,
) -> ScenarioPath:
    """模拟一个场景

    先抽 ξ 与 Θ 并解析求出 τ，再在插入了 ξ、τ 的网格上生成布朗增量。

    Args:
        params: 模型参数
        horizon: 模拟区间 T_sim
        dt: 均匀步长
        rng: 随机源
        seed: 仅用于记录来源

    Raises:
        DomainError: horizon 或 dt 无效
    """
    _check_horizon(horizon, dt)
    xi = sample_change_point(params, rng)
    theta = float(rng.exponential(1.0))
    tau = sample_default_time(params, xi, theta)

    grid = uniform_grid(horizon, dt)
    events = [e for e in (xi, tau) if 0.0 < e < horizon]
    if events:
        grid = np.union1d(grid, np.asarray(events, dtype=np.float64))

    increments = rng.standard_normal(len(grid) - 1) * np.sqrt(np.diff(grid))
    brownian = np.concatenate(([0.0], np.cumsum(increments)))
    logger.debug(f"场景: ξ={xi:.6g}, Θ={theta:.6g}, τ={tau:.6g}, 节点数={len(grid)}")
    return build_scenario(params, grid, xi, theta, tau, brownian, seed=seed)


def simulate_seeded(params: ModelParams, horizon: float, dt: float, seed: int) -> ScenarioPath:
    """场景是 (params, horizon, dt, seed) 的纯函数"""
    return simulate_scenario(params, horizon, dt, np.random.default_rng(seed), seed=seed)


def coarsen_scenario(scenario: ScenarioPath, factor: int) -> ScenarioPath:
    """把场景限制到更粗的网格

    保留均匀节点中下标为 factor 倍数者、末节点以及 ξ、τ 节点；
    B、Y、H、μ 直接取自细网格，因此粗细两条滤波共享同一组增量。
    """
    if factor < 1:
        raise DomainError("factor", f"粗化倍数必须 ≥ 1: {factor}")
    if factor == 1:
        return scenario

    grid = scenario.grid
    horizon = scenario.horizon
    is_event = np.zeros(len(grid), dtype=bool)
    for event in (scenario.xi, scenario.tau):
        if 0.0 < event < horizon:
            is_event |= grid == event
    # 事件节点之外的节点按出现顺序编号，即均匀网格的下标
    uniform_rank = np.cumsum(~is_event) - 1
    keep = is_event | ((uniform_rank % factor) == 0)
    keep[0] = True
    keep[-1] = True
    return ScenarioPath(
        grid=grid[keep],
        xi=scenario.xi,
        theta=scenario.theta,
        tau=scenario.tau,
        brownian=scenario.brownian[keep],
        y_obs=scenario.y_obs[keep],
        h_ind=scenario.h_ind[keep],
        mu_path=scenario.mu_path[keep],
        seed=scenario.seed,
    )
