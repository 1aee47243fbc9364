"""
合约描述与市场因子钩子
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from ..core.exceptions import DomainError
from .constants import ContractKind

RateFunction = Callable[[float], float]

# 构造时用来抽查回收函数与利率函数的节点数
_CHECK_POINTS = 33


def _constant(value: float) -> RateFunction:
    return lambda s: value


@dataclass(frozen=True)
class ContractSpec:
    """信用/死亡风险敏感合约

    Attributes:
        maturity_T: 到期时刻
        face_L: 到期支付的面值 L
        premium_rate: 连续支付的费率 p(s)
        recovery: 违约时支付 W(s)
        discount_rate: 确定性短期利率 r(s)
        kind: 合约类型，见 ContractKind
        delta: zcb 的回收比例 δ
        notional: cds 名义本金，回收上界
        flat_rate: 常数利率时填写，启用闭式贴现
        flat_premium: 常数费率时填写
        flat_recovery: 常数回收时填写
    """

    maturity_T: float
    face_L: float
    premium_rate: RateFunction
    recovery: RateFunction
    discount_rate: RateFunction
    kind: str
    delta: Optional[float] = None
    notional: float = 1.0
    flat_rate: Optional[float] = None
    flat_premium: Optional[float] = None
    flat_recovery: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.maturity_T > 0.0:
            raise DomainError("maturity_T", f"到期必须为正: {self.maturity_T}")
        if self.face_L < 0.0:
            raise DomainError("face_L", f"面值不能为负: {self.face_L}")
        if self.kind not in ContractKind.ALL:
            raise DomainError("kind", f"未知合约类型: {self.kind}")
        if self.kind == ContractKind.ZCB and (self.delta is None or not 0.0 <= self.delta <= 1.0):
            raise DomainError("delta", f"zcb 的回收比例必须位于 [0, 1]: {self.delta}")
        if self.flat_rate is not None and not self.flat_rate > 0.0:
            raise DomainError("discount_rate", f"利率必须为正: {self.flat_rate}")

        cap = self.notional if self.kind == ContractKind.CDS else self.face_L
        for s in np.linspace(0.0, self.maturity_T, _CHECK_POINTS):
            w = self.recovery(float(s))
            if not 0.0 <= w <= cap:
                raise DomainError("recovery", f"W({s:.6g}) = {w} 超出 [0, {cap}]")
            if not self.discount_rate(float(s)) > 0.0:
                raise DomainError("discount_rate", f"r({s:.6g}) 必须为正")

    @classmethod
    def zcb(cls, maturity_T: float, r: float, delta: float, face_L: float = 1.0) -> "ContractSpec":
        """可违约零息债：到期付 L，违约时付 δ·L"""
        return cls(
            maturity_T=maturity_T,
            face_L=face_L,
            premium_rate=_constant(0.0),
            recovery=_constant(delta * face_L),
            discount_rate=_constant(r),
            kind=ContractKind.ZCB,
            delta=delta,
            flat_rate=r,
            flat_premium=0.0,
            flat_recovery=delta * face_L,
        )

    @classmethod
    def coupon_bond(
        cls, maturity_T: float, r: float, coupon: float, face_L: float = 1.0, delta: float = 0.0
    ) -> "ContractSpec":
        """连续付息债：存续期内按 coupon·L 付息，违约时付 δ·L"""
        return cls(
            maturity_T=maturity_T,
            face_L=face_L,
            premium_rate=_constant(coupon * face_L),
            recovery=_constant(delta * face_L),
            discount_rate=_constant(r),
            kind=ContractKind.COUPON_BOND,
            delta=delta,
            flat_rate=r,
            flat_premium=coupon * face_L,
            flat_recovery=delta * face_L,
        )

    @classmethod
    def cds(cls, maturity_T: float, r: float, spread: float, protection: float, notional: float = 1.0) -> "ContractSpec":
        """CDS：买方连续支付 spread，违约时获得 protection"""
        return cls(
            maturity_T=maturity_T,
            face_L=0.0,
            premium_rate=_constant(spread),
            recovery=_constant(protection),
            discount_rate=_constant(r),
            kind=ContractKind.CDS,
            notional=notional,
            flat_rate=r,
            flat_premium=spread,
            flat_recovery=protection,
        )

    def with_spread(self, spread: float) -> "ContractSpec":
        """替换为常数费率"""
        return replace(self, premium_rate=_constant(spread), flat_premium=spread)


@dataclass(frozen=True)
class MarketFactorHooks:
    """与 (ξ, τ) 独立的市场因子的条件期望

    Attributes:
        expect_psi_at: s ↦ Ẽ[ψ(X_s)|F̃_t]，违约时支付的期望
        expect_phi_T: Ẽ[Φ(X_T)|F̃_t]，到期支付的期望
    """

    expect_psi_at: RateFunction
    expect_phi_T: float

    @classmethod
    def constant(cls, psi: float, phi_T: float) -> "MarketFactorHooks":
        return cls(expect_psi_at=_constant(psi), expect_phi_T=phi_T)

    @classmethod
    def exponential_growth(cls, growth: float, phi_T: float, scale: float = 1.0) -> "MarketFactorHooks":
        """ψ 的期望按 scale·e^{g s} 增长"""
        return cls(expect_psi_at=lambda s: scale * float(np.exp(growth * s)), expect_phi_T=phi_T)
