"""
模型参数

ModelParams 是不可变的 pydantic 记录；构造时校验边界，
派生量 Δμ 与 κ 以属性形式给出。
"""

import math
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..core.exceptions import DomainError

DEFAULT_DEGENERACY_TOL = 1e-9


class ModelParams(BaseModel):
    """风险率变点模型的静态参数"""

    model_config = ConfigDict(frozen=True)

    pi0: float  # ξ 在 0 处的原子概率 π
    lam: float  # 变点强度 λ（1/年）
    mu1: float  # 变点前风险率 μ1
    mu2: float  # 变点后风险率 μ2
    beta: float  # 观测噪声尺度 β
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL  # 退化情形判定容差

    @field_validator("pi0")
    @classmethod
    def _check_probability(cls, value: float) -> float:
        if not (math.isfinite(value) and 0.0 <= value <= 1.0):
            raise ValueError(f"必须位于 [0, 1]，实际为 {value}")
        return value

    @field_validator("lam", "mu1", "mu2", "beta")
    @classmethod
    def _check_positive(cls, value: float) -> float:
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"必须为正的有限数，实际为 {value}")
        return value

    @field_validator("degeneracy_tol")
    @classmethod
    def _check_tolerance(cls, value: float) -> float:
        if not (math.isfinite(value) and value >= 0.0):
            raise ValueError(f"必须为非负有限数，实际为 {value}")
        return value

    @property
    def delta_mu(self) -> float:
        """Δμ = μ2 − μ1"""
        return self.mu2 - self.mu1

    @property
    def is_degenerate(self) -> bool:
        """|Δμ − λ| 落在退化容差内时使用 μ2 = μ1 + λ 的极限公式"""
        return abs(self.delta_mu - self.lam) <= self.degeneracy_tol * max(1.0, self.lam)

    @property
    def kappa(self) -> Optional[float]:
        """κ = Δμ/(Δμ − λ)，退化情形下为 None"""
        if self.is_degenerate:
            return None
        return self.delta_mu / (self.delta_mu - self.lam)

    def replace(self, **changes: Any) -> "ModelParams":
        """返回修改部分字段后的新参数（重新校验）"""
        values = self.model_dump()
        values.update(changes)
        return new_params(**values)


def new_params(
    pi0: float,
    lam: float,
    mu1: float,
    mu2: float,
    beta: float,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
) -> ModelParams:
    """校验并构造 ModelParams

    Raises:
        DomainError: 任一字段越界，field 为出错字段名
    """
    try:
        return ModelParams(pi0=pi0, lam=lam, mu1=mu1, mu2=mu2, beta=beta, degeneracy_tol=degeneracy_tol)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first.get("loc") else "params"
        raise DomainError(field, first.get("msg", "")) from e
