"""
定价

一般信用敏感合约的价格由三部分组成：到期面值、存续期费率流、违约时的回收，
积分均用自适应 Simpson。常数利率下可违约零息债有闭式解。
所有价格在已违约（h=1）时为 0。
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

from scipy.optimize import brentq

from ..config.logging_config import get_logger
from ..models.constants import ContractKind, Regime
from ..models.contract import ContractSpec, MarketFactorHooks
from ..models.info_state import InfoState
from ..models.params import ModelParams
from ..models.paths import FilterPath, ScenarioPath
from .analytics import density_partial, survival_partial
from .exceptions import DomainError
from .quadrature import adaptive_simpson

logger = get_logger(__name__)

PRICE_QUAD_TOL = 1e-10
PRICE_MAX_DEPTH = 40

Rate = Union[float, Callable[[float], float]]


def discount_factor(rate: Rate, t: float, s: float) -> float:
    """exp(−∫_t^s r(u) du)，常数利率走闭式"""
    if s == t:
        return 1.0
    if isinstance(rate, (int, float)):
        return math.exp(-float(rate) * (s - t))
    return math.exp(-adaptive_simpson(rate, t, s, tol=1e-13))


def _contract_rate(contract: ContractSpec) -> Rate:
    return contract.flat_rate if contract.flat_rate is not None else contract.discount_rate


def _check_partial(state: InfoState, maturity_T: float) -> None:
    if state.regime != Regime.PARTIAL:
        raise DomainError("regime", f"需要 partial 信息，实际为 {state.regime}")
    if state.t > maturity_T:
        raise DomainError("t", f"估值时刻 {state.t} 晚于到期 {maturity_T}")


@dataclass(frozen=True)
class PriceLegs:
    """价格分解

    Attributes:
        face: L·disc(t,T)·P(τ>T)
        premium: ∫ P(τ>s)·disc(t,s)·p(s) ds
        protection: ∫ disc(t,s)·W(s)·密度(s) ds
    """

    face: float
    premium: float
    protection: float


def price_legs(params: ModelParams, contract: ContractSpec, state: InfoState, tol: float = PRICE_QUAD_TOL) -> PriceLegs:
    """部分信息下各支付腿的现值

    Raises:
        QuadratureError: 积分在最大深度内未达到容差
    """
    _check_partial(state, contract.maturity_T)
    if state.h:
        return PriceLegs(face=0.0, premium=0.0, protection=0.0)

    t = state.t
    maturity = contract.maturity_T
    rate = _contract_rate(contract)
    at_maturity = state.at_horizon(maturity)

    face = 0.0
    if contract.face_L > 0.0:
        face = contract.face_L * discount_factor(rate, t, maturity) * survival_partial(params, at_maturity)

    premium = 0.0
    if contract.flat_premium != 0.0:

        def premium_density(s: float) -> float:
            alive = survival_partial(params, state.at_horizon(s))
            return alive * discount_factor(rate, t, s) * contract.premium_rate(s)

        premium = adaptive_simpson(premium_density, t, maturity, tol=tol, max_depth=PRICE_MAX_DEPTH)

    protection = 0.0
    if contract.flat_recovery != 0.0:

        def recovery_density(s: float) -> float:
            return discount_factor(rate, t, s) * contract.recovery(s) * density_partial(params, at_maturity, s)

        protection = adaptive_simpson(recovery_density, t, maturity, tol=tol, max_depth=PRICE_MAX_DEPTH)

    return PriceLegs(face=face, premium=premium, protection=protection)


def price_general(params: ModelParams, contract: ContractSpec, state: InfoState, tol: float = PRICE_QUAD_TOL) -> float:
    """信用敏感合约的一般定价公式（持有人视角）"""
    legs = price_legs(params, contract, state, tol)
    return legs.face + legs.premium + legs.protection


def price_cds(params: ModelParams, contract: ContractSpec, state: InfoState, tol: float = PRICE_QUAD_TOL) -> float:
    """CDS 对保护买方的价值：保护腿 − 费用腿"""
    if contract.kind != ContractKind.CDS:
        raise DomainError("kind", f"需要 cds 合约，实际为 {contract.kind}")
    legs = price_legs(params, contract, state, tol)
    return legs.protection - legs.premium


def fair_spread(params: ModelParams, contract: ContractSpec, state: InfoState, tol: float = PRICE_QUAD_TOL) -> float:
    """使 CDS 价值为 0 的常数费率

    Raises:
        DomainError: 已违约或保护腿为 0，公平费率无定义
    """
    if state.h:
        raise DomainError("h", "已违约时公平费率无定义")
    protection = price_legs(params, contract.with_spread(0.0), state, tol).protection
    if protection <= 0.0:
        raise DomainError("recovery", "保护腿为 0，公平费率无定义")

    upper = 1.0
    while price_cds(params, contract.with_spread(upper), state, tol) > 0.0:
        upper *= 2.0
    spread = brentq(lambda p: price_cds(params, contract.with_spread(p), state, tol), 0.0, upper, xtol=1e-14, rtol=1e-13)
    logger.debug(f"公平费率: {spread:.10g}（上界 {upper}）")
    return float(spread)


def _check_dzcb(r: float, delta: float) -> None:
    if not r > 0.0:
        raise DomainError("r", f"利率必须为正: {r}")
    if not 0.0 <= delta <= 1.0:
        raise DomainError("delta", f"回收比例必须位于 [0, 1]: {delta}")


def _dzcb(params: ModelParams, r: float, delta: float, u: float, weight: float) -> float:
    if u == 0.0:
        return 1.0
    rate2 = r + params.mu2
    decay2 = math.exp(-rate2 * u)
    kappa = params.kappa
    if kappa is None:
        lam_w = params.lam * weight
        return (1.0 + lam_w * u * (1.0 - delta * params.mu2 / rate2)) * decay2 + delta / rate2 * (
            params.mu2 - lam_w * (1.0 - params.mu2 / rate2)
        ) * (1.0 - decay2)
    hazard1 = params.mu1 + params.lam
    rate1 = r + hazard1
    decay1 = math.exp(-rate1 * u)
    pre = decay1 + delta * hazard1 / rate1 * (1.0 - decay1)
    post = decay2 + delta * params.mu2 / rate2 * (1.0 - decay2)
    return kappa * weight * pre + (1.0 - kappa * weight) * post


def price_dzcb_partial(params: ModelParams, r: float, delta: float, state: InfoState) -> float:
    """部分信息下可违约零息债（面值 1，回收 δ）闭式价格"""
    _check_dzcb(r, delta)
    if state.regime != Regime.PARTIAL:
        raise DomainError("regime", f"需要 partial 信息，实际为 {state.regime}")
    if state.h:
        return 0.0
    return _dzcb(params, r, delta, state.remaining, state.pre_change_weight)


def price_dzcb_full(params: ModelParams, r: float, delta: float, state: InfoState) -> float:
    """完全信息下可违约零息债闭式价格"""
    _check_dzcb(r, delta)
    if state.regime != Regime.FULL:
        raise DomainError("regime", f"需要 full 信息，实际为 {state.regime}")
    if state.h:
        return 0.0
    return _dzcb(params, r, delta, state.remaining, state.pre_change_weight)


def price_with_market_factor(
    params: ModelParams,
    hooks: MarketFactorHooks,
    r: Rate,
    state: InfoState,
    maturity_T: float,
    tol: float = PRICE_QUAD_TOL,
) -> float:
    """支付依赖独立市场因子时的价格

    ∫_t^T disc(t,s)·Ẽ[ψ(X_s)]·密度(s) ds + disc(t,T)·Ẽ[Φ(X_T)]·P(τ>T)
    """
    _check_partial(state, maturity_T)
    if state.h:
        return 0.0
    at_maturity = state.at_horizon(maturity_T)

    def integrand(s: float) -> float:
        return discount_factor(r, state.t, s) * hooks.expect_psi_at(s) * density_partial(params, at_maturity, s)

    payout = adaptive_simpson(integrand, state.t, maturity_T, tol=tol, max_depth=PRICE_MAX_DEPTH)
    terminal = discount_factor(r, state.t, maturity_T) * hooks.expect_phi_T * survival_partial(params, at_maturity)
    return payout + terminal


def price_curve(
    params: ModelParams,
    scenario: ScenarioPath,
    filter_path: FilterPath,
    r: float,
    delta: float,
    maturity_T: float,
    stride: int = 1,
) -> List[Tuple[float, float, float, float]]:
    """沿一个场景计算 (t, 部分信息价格, 完全信息价格, Π_t)

    只输出 t ≤ maturity_T 的节点，每 stride 个节点取一个，ξ 与 τ 节点总是保留。
    """
    if filter_path.pi_g is None:
        raise DomainError("filter_path", "需要 G^Y 滤波轨迹")
    rows: List[Tuple[float, float, float, float]] = []
    for i, t in enumerate(scenario.grid.tolist()):
        if t > maturity_T:
            break
        is_event = t == scenario.xi or t == scenario.tau
        if i % stride and not is_event and t != maturity_T:
            continue
        h = int(scenario.h_ind[i])
        pi = float(filter_path.pi_g[i])
        partial = price_dzcb_partial(params, r, delta, InfoState.partial(t, maturity_T, pi, h))
        full = price_dzcb_full(params, r, delta, InfoState.full(t, maturity_T, scenario.xi > t, h))
        rows.append((t, partial, full, pi))
    return rows


def contract_for_kind(kind: str, maturity_T: float, r: float, delta: float, coupon: float, spread: float) -> ContractSpec:
    """按类型名构造常用合约"""
    if kind == ContractKind.ZCB:
        return ContractSpec.zcb(maturity_T, r, delta)
    if kind == ContractKind.COUPON_BOND:
        return ContractSpec.coupon_bond(maturity_T, r, coupon, delta=delta)
    if kind == ContractKind.CDS:
        return ContractSpec.cds(maturity_T, r, spread, protection=1.0 - delta)
    raise DomainError("kind", f"未知合约类型: {kind}")


__all__ = [
    "PRICE_QUAD_TOL",
    "PriceLegs",
    "discount_factor",
    "price_legs",
    "price_general",
    "price_cds",
    "fair_spread",
    "price_dzcb_partial",
    "price_dzcb_full",
    "price_with_market_factor",
    "price_curve",
    "contract_for_kind",
]
