"""
信息状态 InfoState

full 类型携带 1{ξ>t}，partial 类型携带滤波值 Π_t。
"""

from dataclasses import dataclass
from typing import Optional

from ..core.exceptions import DomainError
from .constants import Regime


@dataclass(frozen=True)
class InfoState:
    """估值时刻的信息

    Attributes:
        t: 估值时刻
        horizon_T: 到期时刻，T ≥ t
        h: t 时刻的违约指示
        pi: partial 信息下的 Π_t
        xi_after_t: full 信息下的 1{ξ>t}
    """

    t: float
    horizon_T: float
    h: int = 0
    pi: Optional[float] = None
    xi_after_t: Optional[bool] = None

    def __post_init__(self) -> None:
        if self.t < 0.0:
            raise DomainError("t", f"估值时刻不能为负: {self.t}")
        if self.t > self.horizon_T:
            raise DomainError("t", f"估值时刻 {self.t} 晚于到期 {self.horizon_T}")
        if self.h not in (0, 1):
            raise DomainError("h", f"违约指示只能是 0 或 1: {self.h}")
        if (self.pi is None) == (self.xi_after_t is None):
            raise DomainError("regime", "必须且只能给出 pi 或 xi_after_t 之一")
        if self.pi is not None and not (0.0 <= self.pi <= 1.0):
            raise DomainError("pi", f"必须位于 [0, 1]: {self.pi}")

    @classmethod
    def partial(cls, t: float, horizon_T: float, pi: float, h: int = 0) -> "InfoState":
        return cls(t=float(t), horizon_T=float(horizon_T), h=int(h), pi=float(pi))

    @classmethod
    def full(cls, t: float, horizon_T: float, xi_after_t: bool, h: int = 0) -> "InfoState":
        return cls(t=float(t), horizon_T=float(horizon_T), h=int(h), xi_after_t=bool(xi_after_t))

    @property
    def regime(self) -> str:
        return Regime.PARTIAL if self.pi is not None else Regime.FULL

    @property
    def pre_change_weight(self) -> float:
        """变点尚未发生的（条件）概率：partial 为 1−Π，full 为 1{ξ>t}"""
        if self.pi is not None:
            return 1.0 - self.pi
        return 1.0 if self.xi_after_t else 0.0

    @property
    def remaining(self) -> float:
        """T − t"""
        return self.horizon_T - self.t

    def at_horizon(self, horizon_T: float) -> "InfoState":
        """同一信息下换一个到期时刻"""
        return InfoState(t=self.t, horizon_T=horizon_T, h=self.h, pi=self.pi, xi_after_t=self.xi_after_t)
