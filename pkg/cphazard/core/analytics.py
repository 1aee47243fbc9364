"""
闭式条件生存概率与密度

记 u = T − t。完全信息下的 f(t, x, h)：
    f(t, μ2, 0) = e^{−μ2 u}
    f(t, μ1, 0) = κ e^{−(μ1+λ)u} + (1−κ) e^{−μ2 u}      （非退化）
    f(t, μ1, 0) = (1 + λu) e^{−μ2 u}                      （μ2 = μ1 + λ）
    f(t, ·, 1) = 0
部分信息下 g(t, Π, h) = (1−Π) f(t, μ1, h) + Π f(t, μ2, h)，对 Π 仿射。
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config.logging_config import get_logger
from ..models.constants import Regime
from ..models.info_state import InfoState
from ..models.params import ModelParams
from .exceptions import DomainError
from .quadrature import adaptive_simpson

logger = get_logger(__name__)

# f(t, post_change, h) 形式的完全信息生存函数
FullSurvival = Callable[[float, bool, int], float]


def pre_change_survival(params: ModelParams, u: float) -> float:
    """f(t, μ1, 0)，u = T − t"""
    decay = math.exp(-params.mu2 * u)
    kappa = params.kappa
    if kappa is None:
        return (1.0 + params.lam * u) * decay
    return kappa * math.exp(-(params.mu1 + params.lam) * u) + (1.0 - kappa) * decay


def post_change_survival(params: ModelParams, u: float) -> float:
    """f(t, μ2, 0)"""
    return math.exp(-params.mu2 * u)


def pre_change_density(params: ModelParams, u: float) -> float:
    """−∂_T f(t, μ1, 0)，u = s − t"""
    decay = math.exp(-params.mu2 * u)
    kappa = params.kappa
    if kappa is None:
        return decay * (params.mu2 * (1.0 + params.lam * u) - params.lam)
    rate = params.mu1 + params.lam
    return rate * kappa * math.exp(-rate * u) + params.mu2 * (1.0 - kappa) * decay


def post_change_density(params: ModelParams, u: float) -> float:
    """−∂_T f(t, μ2, 0)"""
    return params.mu2 * math.exp(-params.mu2 * u)


def _weighted_survival(params: ModelParams, u: float, weight: float, h: int) -> float:
    if h:
        return 0.0
    if u == 0.0:
        return 1.0
    return weight * pre_change_survival(params, u) + (1.0 - weight) * post_change_survival(params, u)


def _weighted_density(params: ModelParams, u: float, weight: float, h: int) -> float:
    if h:
        return 0.0
    value = weight * pre_change_density(params, u) + (1.0 - weight) * post_change_density(params, u)
    if value < 0.0:
        logger.warning(f"条件密度为负: {value:.3e}（u={u:.6g}, 权重={weight:.6g}），参数组合可能不在有效范围内")
    return value


def _require(state: InfoState, regime: str) -> None:
    if state.regime != regime:
        raise DomainError("regime", f"需要 {regime} 信息，实际为 {state.regime}")


def survival_full(params: ModelParams, state: InfoState) -> float:
    """完全信息下 P(τ > T | G_t)"""
    _require(state, Regime.FULL)
    return _weighted_survival(params, state.remaining, state.pre_change_weight, state.h)


def survival_partial(params: ModelParams, state: InfoState) -> float:
    """部分信息下 P(τ > T | G^Y_t) = (1−Π) f(t, μ1, h) + Π f(t, μ2, h)"""
    _require(state, Regime.PARTIAL)
    return _weighted_survival(params, state.remaining, state.pre_change_weight, state.h)


def density_partial(params: ModelParams, state: InfoState, s: float) -> float:
    """部分信息下 τ 在 s 处的条件密度

    Raises:
        DomainError: s < t
    """
    _require(state, Regime.PARTIAL)
    if s < state.t:
        raise DomainError("s", f"s={s} 早于估值时刻 {state.t}")
    return _weighted_density(params, s - state.t, state.pre_change_weight, state.h)


def density_full(params: ModelParams, state: InfoState, s: float) -> float:
    """完全信息下 τ 在 s 处的条件密度"""
    _require(state, Regime.FULL)
    if s < state.t:
        raise DomainError("s", f"s={s} 早于估值时刻 {state.t}")
    return _weighted_density(params, s - state.t, state.pre_change_weight, state.h)


def survival_curve(params: ModelParams, state: InfoState, s_grid: Sequence[float]) -> List[Tuple[float, float, float]]:
    """(s, P(τ > s | ·), 密度(s)) 三元组，信息类型由 state 决定"""
    rows = []
    for s in s_grid:
        at_s = state.at_horizon(float(s))
        if state.regime == Regime.PARTIAL:
            rows.append((float(s), survival_partial(params, at_s), density_partial(params, state, float(s))))
        else:
            rows.append((float(s), survival_full(params, at_s), density_full(params, state, float(s))))
    return rows


def survival_by_xi_quadrature(params: ModelParams, horizon_T: float, tol: float = 1e-12) -> float:
    """对 ξ 的分布做一维积分得到 P(τ > T)

    P(τ>T) = π e^{−μ2T} + (1−π)[∫_0^T λe^{−λx} e^{−μ1x−μ2(T−x)} dx + e^{−λT} e^{−μ1T}]
    """
    if horizon_T < 0.0:
        raise DomainError("horizon_T", f"不能为负: {horizon_T}")
    lam, mu1, mu2 = params.lam, params.mu1, params.mu2

    def integrand(x: float) -> float:
        return lam * math.exp(-lam * x - mu1 * x - mu2 * (horizon_T - x))

    after_change = adaptive_simpson(integrand, 0.0, horizon_T, tol=tol)
    no_change = math.exp(-(lam + mu1) * horizon_T)
    return params.pi0 * math.exp(-mu2 * horizon_T) + (1.0 - params.pi0) * (after_change + no_change)


@dataclass(frozen=True)
class GeneratorCheck:
    """生成元残差

    Attributes:
        markov_residual: (μ, H) 嵌套常微分方程组的最大残差
        filter_residual: (Π, H) 生成元作用于 g 的最大残差
        affine_curvature: max |∂²g/∂Π²|
        terminal_residual: 终端条件 f(T, x, h) = 1 − h 的最大偏差
    """

    markov_residual: float
    filter_residual: float
    affine_curvature: float
    terminal_residual: float

    @property
    def max_residual(self) -> float:
        return max(self.markov_residual, self.filter_residual, self.affine_curvature, self.terminal_residual)


def closed_form_f(params: ModelParams, horizon_T: float) -> FullSurvival:
    """以 (t, 是否已变点, h) 为参数的完全信息生存函数，t 可略超出 [0, T] 以便差分"""

    def f(t: float, post_change: bool, h: int) -> float:
        if h:
            return 0.0
        u = horizon_T - t
        return post_change_survival(params, u) if post_change else pre_change_survival(params, u)

    return f


def generator_check(
    params: ModelParams,
    grid: Sequence[float],
    horizon_T: float = 10.0,
    h_fd: Optional[float] = None,
    f: Optional[FullSurvival] = None,
    pi_lattice: Optional[Sequence[float]] = None,
    h_pi: float = 1e-2,
) -> GeneratorCheck:
    """在网格点上用中心差分检查生成元方程

    (μ, H) 方程组：
        ∂t f(μ1,0) + λ[f(μ2,0) − f(μ1,0)] + μ1[f(μ1,1) − f(μ1,0)] = 0
        ∂t f(μ2,0) + μ2[f(μ2,1) − f(μ2,0)] = 0
        ∂t f(μ1,1) + λ[f(μ2,1) − f(μ1,1)] = 0
        ∂t f(μ2,1) = 0
    (Π, H) 生成元：
        ∂t g + (1−x)(λ − Δμx(1−h))∂x g + ½(Δμ/β)²x²(1−x)²∂²x g
            + (1−h)(μ1+Δμx)[g(t, J(x), h+1) − g(t, x, h)] = 0

    Args:
        params: 模型参数
        grid: [0, T) 内的检查时刻
        horizon_T: 到期 T
        h_fd: 时间差分步长，默认 1e-5·max(1, T)
        f: 待检查的完全信息生存函数，默认用闭式解
        pi_lattice: Π 方向的检查点，默认 0.05..0.95
        h_pi: Π 方向差分步长
    """
    for t in grid:
        if not 0.0 <= t < horizon_T:
            raise DomainError("grid", f"检查时刻 {t} 不在 [0, {horizon_T}) 内")
    step = h_fd if h_fd is not None else 1e-5 * max(1.0, horizon_T)
    func = f if f is not None else closed_form_f(params, horizon_T)
    lattice = list(pi_lattice) if pi_lattice is not None else np.linspace(0.05, 0.95, 19).tolist()
    lam, mu1, mu2, d_mu = params.lam, params.mu1, params.mu2, params.delta_mu
    vol_sq = (d_mu / params.beta) ** 2

    def d_t(t: float, post_change: bool, h: int) -> float:
        return (func(t + step, post_change, h) - func(t - step, post_change, h)) / (2.0 * step)

    def g(t: float, x: float, h: int) -> float:
        return (1.0 - x) * func(t, False, h) + x * func(t, True, h)

    def jump(x: float) -> float:
        return mu2 * x / (mu1 * (1.0 - x) + mu2 * x)

    markov = 0.0
    filt = 0.0
    curvature = 0.0
    for t in grid:
        f10, f20 = func(t, False, 0), func(t, True, 0)
        f11, f21 = func(t, False, 1), func(t, True, 1)
        residuals = (
            d_t(t, False, 0) + lam * (f20 - f10) + mu1 * (f11 - f10),
            d_t(t, True, 0) + mu2 * (f21 - f20),
            d_t(t, False, 1) + lam * (f21 - f11),
            d_t(t, True, 1),
        )
        markov = max(markov, max(abs(r) for r in residuals))

        for x in lattice:
            for h in (0, 1):
                g_mid = g(t, x, h)
                g_up, g_down = g(t, x + h_pi, h), g(t, x - h_pi, h)
                g_t = (g(t + step, x, h) - g(t - step, x, h)) / (2.0 * step)
                g_x = (g_up - g_down) / (2.0 * h_pi)
                g_xx = (g_up - 2.0 * g_mid + g_down) / (h_pi * h_pi)
                residual = (
                    g_t
                    + (1.0 - x) * (lam - d_mu * x * (1 - h)) * g_x
                    + 0.5 * vol_sq * x * x * (1.0 - x) ** 2 * g_xx
                    + (1 - h) * (mu1 + d_mu * x) * (g(t, jump(x), h + 1) - g_mid)
                )
                filt = max(filt, abs(residual))
                curvature = max(curvature, abs(g_xx))

    terminal = max(abs(func(horizon_T, post, h) - (1 - h)) for post in (False, True) for h in (0, 1))
    return GeneratorCheck(
        markov_residual=markov,
        filter_residual=filt,
        affine_curvature=curvature,
        terminal_residual=terminal,
    )


def generator_residual(
    params: ModelParams,
    grid: Sequence[float],
    horizon_T: float = 10.0,
    h_fd: Optional[float] = None,
    f: Optional[FullSurvival] = None,
) -> float:
    """生成元检查的最大残差"""
    return generator_check(params, grid, horizon_T=horizon_T, h_fd=h_fd, f=f).max_residual
