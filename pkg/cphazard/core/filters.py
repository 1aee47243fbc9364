"""
滤波器

G^Y 滤波 Π_t = P(ξ ≤ t | G^Y_t) 用观测驱动形式的显式 Euler–Maruyama 积分，
违约节点处单独施加精确跳跃映射；F^Y 滤波忽略违约信息；
几率比表示在对数空间累积，作为独立的数值参照。

连续步的核函数只用算术运算，标量（逐路径）与 numpy 数组（批量引擎）共用。
"""

import math
from typing import Any, List, Optional

import numpy as np
from scipy.special import expit

from ..config.logging_config import get_logger
from ..models.constants import FilterScheme
from ..models.params import ModelParams
from ..models.paths import FilterPath, ScenarioPath
from .exceptions import DomainError, GridError

logger = get_logger(__name__)

CLAMP_EPS = 1e-12


def jump_map(params: ModelParams, pi_minus: Any) -> Any:
    """违约时刻的跳跃：Π_τ = μ2·Π_{τ−}/(μ1 + Δμ·Π_{τ−})

    分母写成 μ1(1−Π) + μ2Π，使 0 与 1 严格为不动点。
    """
    return params.mu2 * pi_minus / (params.mu1 * (1.0 - pi_minus) + params.mu2 * pi_minus)


def clamped_jump(params: ModelParams, pi_minus: Any) -> Any:
    """跳跃后按连续步的上界截断：Π_{τ−} < 1 时 Π_τ ≤ 1 − CLAMP_EPS，Π = 1 保持吸收

    μ1 ≪ μ2 且 Π_{τ−} 接近 1 时，jump_map 在浮点下会舍入成 1.0。
    """
    jumped = jump_map(params, pi_minus)
    if np.ndim(pi_minus) == 0:
        return 1.0 if pi_minus >= 1.0 else min(float(jumped), 1.0 - CLAMP_EPS)
    return np.where(pi_minus >= 1.0, 1.0, np.minimum(jumped, 1.0 - CLAMP_EPS))


def hazard_estimate(params: ModelParams, pi: Any) -> Any:
    """μ̂ = μ1 + Δμ·Π"""
    return params.mu1 + params.delta_mu * pi


def continuous_increment(
    params: ModelParams,
    pi: Any,
    d_y: Any,
    dt: Any,
    compensate: Any,
    milstein: bool = False,
) -> Any:
    """一步连续演化（未截断）

    compensate 为 1 时加入违约补偿项 −ΔμΠ(1−Π)dt（G^Y 违约前），
    为 0 时对应违约后或 F^Y 滤波。
    """
    gain = params.delta_mu / (params.beta * params.beta)
    spread = pi * (1.0 - pi)
    value = (
        pi
        + params.lam * (1.0 - pi) * dt
        + gain * spread * (d_y - params.delta_mu * pi * dt)
        - compensate * params.delta_mu * spread * dt
    )
    if milstein:
        # ½·s·s'·((ΔY)² − β²Δt)，s = gain·Π(1−Π)
        value = value + 0.5 * gain * gain * spread * (1.0 - 2.0 * pi) * (d_y * d_y - params.beta * params.beta * dt)
    return value


def _clamp(pi_prev: float, raw: float) -> float:
    if pi_prev >= 1.0:
        return 1.0
    return min(max(raw, CLAMP_EPS), 1.0 - CLAMP_EPS)


def clamp_array(pi_prev: np.ndarray, raw: np.ndarray) -> np.ndarray:
    """数组版截断，Π=1 保持吸收"""
    return np.where(pi_prev >= 1.0, 1.0, np.clip(raw, CLAMP_EPS, 1.0 - CLAMP_EPS))


def _check_step(pi_prev: float, dt: float) -> None:
    if not dt > 0.0:
        raise DomainError("dt", f"步长必须为正: {dt}")
    if not 0.0 <= pi_prev <= 1.0:
        raise DomainError("pi_prev", f"必须位于 [0, 1]: {pi_prev}")


def step_filter_g(
    params: ModelParams,
    pi_prev: float,
    d_y: float,
    dt: float,
    default_in_step: bool,
    post_default: bool = False,
    milstein: bool = False,
) -> float:
    """G^Y 滤波的一步

    Args:
        params: 模型参数
        pi_prev: 步初 Π
        d_y: 观测增量 ΔY
        dt: 步长
        default_in_step: τ 恰在本步末端
        post_default: 步初已违约（H=1）
        milstein: 加入 Milstein 修正项

    Raises:
        DomainError: dt ≤ 0、pi_prev 越界，或已违约后再次违约
    """
    _check_step(pi_prev, dt)
    if default_in_step and post_default:
        raise DomainError("default_in_step", "违约后不能再次违约")
    raw = continuous_increment(params, pi_prev, d_y, dt, 0.0 if post_default else 1.0, milstein)
    pi = _clamp(pi_prev, raw)
    if default_in_step:
        pi = clamped_jump(params, pi)
    return float(pi)


def step_filter_f(params: ModelParams, pi_prev: float, d_y: float, dt: float, milstein: bool = False) -> float:
    """F^Y 滤波的一步：无跳跃、无违约补偿"""
    _check_step(pi_prev, dt)
    return float(_clamp(pi_prev, continuous_increment(params, pi_prev, d_y, dt, 0.0, milstein)))


def _default_node(scenario: ScenarioPath) -> Optional[int]:
    idx = scenario.tau_index
    if idx == -1:
        raise GridError(f"τ={scenario.tau!r} 位于模拟区间内但不是网格节点")
    return idx


def run_filter_g(params: ModelParams, scenario: ScenarioPath, milstein: bool = False) -> FilterPath:
    """沿场景网格积分 G^Y 滤波

    Raises:
        GridError: τ ∈ (0, T_sim] 但不是网格节点
    """
    tau_index = _default_node(scenario)
    grid = scenario.grid.tolist()
    y_obs = scenario.y_obs.tolist()
    h_ind = scenario.h_ind.tolist()

    pi = float(params.pi0)
    values: List[float] = [pi]
    pi_tau_minus: Optional[float] = None
    for i in range(len(grid) - 1):
        dt = grid[i + 1] - grid[i]
        d_y = y_obs[i + 1] - y_obs[i]
        compensate = 0.0 if h_ind[i] else 1.0
        pi = _clamp(pi, continuous_increment(params, pi, d_y, dt, compensate, milstein))
        if tau_index == i + 1:
            pi_tau_minus = pi
            pi = clamped_jump(params, pi)
        values.append(pi)

    return FilterPath(
        params=params,
        grid=scenario.grid,
        scheme=FilterScheme.DIRECT_SDE,
        pi_g=np.asarray(values, dtype=np.float64),
        tau_index=tau_index,
        pi_tau_minus=pi_tau_minus,
    )


def run_filter_f(params: ModelParams, scenario: ScenarioPath, milstein: bool = False) -> FilterPath:
    """沿场景网格积分 F^Y 滤波，不需要 τ 节点"""
    grid = scenario.grid.tolist()
    y_obs = scenario.y_obs.tolist()

    pi = float(params.pi0)
    values: List[float] = [pi]
    for i in range(len(grid) - 1):
        dt = grid[i + 1] - grid[i]
        if not dt > 0.0:
            raise DomainError("grid", f"网格必须严格递增，第 {i} 步步长为 {dt}")
        pi = _clamp(pi, continuous_increment(params, pi, y_obs[i + 1] - y_obs[i], dt, 0.0, milstein))
        values.append(pi)

    return FilterPath(
        params=params,
        grid=scenario.grid,
        scheme=FilterScheme.DIRECT_SDE,
        pi_f=np.asarray(values, dtype=np.float64),
    )


def run_filters(params: ModelParams, scenario: ScenarioPath, milstein: bool = False) -> FilterPath:
    """同时给出 G^Y 与 F^Y 两条轨迹"""
    return run_filter_g(params, scenario, milstein).merge(run_filter_f(params, scenario, milstein))


def _log_add(a: float, b: float) -> float:
    """log(e^a + e^b)"""
    if a == -math.inf:
        return b
    high, low = (a, b) if a >= b else (b, a)
    return high + math.log1p(math.exp(low - high))


def run_filter_odds(params: ModelParams, scenario: ScenarioPath) -> FilterPath:
    """几率比表示 φ = Π/(1−Π)

    log φ_t = λt + log Z_t + log(π/(1−π) + λ∫_0^t e^{−λs}/Z_s ds)，
    log Z 与积分项都在对数空间累积，积分用左端点 Riemann 和。
    expit 在几率极大时会舍入成 1.0，输出与直接格式一样以 1 − CLAMP_EPS 为上界。

    Raises:
        DomainError: pi0 = 1（几率比无定义）
        GridError: τ 在区间内但不是节点
    """
    if params.pi0 >= 1.0:
        raise DomainError("pi0", "π = 1 时几率比无定义")
    tau_index = _default_node(scenario)

    grid = scenario.grid.tolist()
    y_obs = scenario.y_obs.tolist()
    h_ind = scenario.h_ind.tolist()

    gain = params.delta_mu / (params.beta * params.beta)
    half_sq = 0.5 * (params.delta_mu / params.beta) ** 2
    log_jump = math.log(params.mu2 / params.mu1)
    log_lam = math.log(params.lam)

    log_a = math.log(params.pi0 / (1.0 - params.pi0)) if params.pi0 > 0.0 else -math.inf
    log_z = 0.0
    log_odds: List[float] = [log_a]
    pi_tau_minus: Optional[float] = None
    for i in range(len(grid) - 1):
        t0, t1 = grid[i], grid[i + 1]
        dt = t1 - t0
        log_a = _log_add(log_a, log_lam + math.log(dt) - params.lam * t0 - log_z)
        log_z += gain * (y_obs[i + 1] - y_obs[i]) - half_sq * dt - params.delta_mu * (1 - h_ind[i]) * dt
        if tau_index == i + 1:
            pi_tau_minus = min(float(expit(params.lam * t1 + log_z + log_a)), 1.0 - CLAMP_EPS)
            log_z += log_jump
        log_odds.append(params.lam * t1 + log_z + log_a)

    return FilterPath(
        params=params,
        grid=scenario.grid,
        scheme=FilterScheme.ODDS_RATIO,
        pi_g=np.minimum(expit(np.asarray(log_odds, dtype=np.float64)), 1.0 - CLAMP_EPS),
        tau_index=tau_index,
        pi_tau_minus=pi_tau_minus,
    )

