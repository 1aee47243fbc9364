"""
蒙特卡洛与统计结果记录
"""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..core.exceptions import SkipNote


class McReport(BaseModel):
    """蒙特卡洛估计"""

    model_config = ConfigDict(frozen=True)

    label: str  # 实验标签
    estimate: float  # 样本均值（或比值估计）
    std_error: float  # 标准误 = 样本标准差 / √n
    n_samples: int  # 样本数
    seed: int  # 根种子

    @field_validator("n_samples")
    @classmethod
    def _check_samples(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"样本数至少为 2，实际为 {value}")
        return value

    @field_validator("std_error")
    @classmethod
    def _check_error(cls, value: float) -> float:
        if not (math.isfinite(value) and value >= 0.0):
            raise ValueError(f"标准误必须为非负有限数，实际为 {value}")
        return value

    def agrees_with(self, comparator: float, n_se: float = 3.0, budget: float = 0.0) -> bool:
        """|estimate − comparator| ≤ n_se·SE + budget"""
        return abs(self.estimate - comparator) <= n_se * self.std_error + budget


class MseRow(BaseModel):
    """某一时刻 G^Y 与 F^Y 估计的均方误差"""

    model_config = ConfigDict(frozen=True)

    time: float
    mse_g: float
    mse_f: float
    se_diff: float  # 成对差 (μ̂−μ)² − (μ̂^F−μ)² 的标准误
    n_samples: int

    @property
    def ordering_holds(self) -> bool:
        return self.mse_g <= self.mse_f + 3.0 * self.se_diff


class SensitivityResult(BaseModel):
    """阈值比例敏感性结果"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    beta: float
    mu2: float
    times: List[float]  # 评估时刻，以 ξ 的倍数给出
    fractions_below: List[float]  # Π_t < 下阈值 的比例
    fractions_above: List[float]  # Π_t > 上阈值 的比例
    n_paths: int  # 参与统计的路径数
    skipped: Optional[SkipNote] = None

    @field_validator("fractions_below", "fractions_above")
    @classmethod
    def _check_fractions(cls, values: List[float]) -> List[float]:
        for value in values:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"比例必须位于 [0, 1]，实际为 {value}")
        return values


class RateSeriesStats(BaseModel):
    """利率序列的样本统计"""

    model_config = ConfigDict(frozen=True)

    mean: float
    std_dev: float
    ci_low: float
    ci_high: float
    n_obs: int

    @model_validator(mode="after")
    def _check_interval(self) -> "RateSeriesStats":
        if self.std_dev < 0.0:
            raise ValueError("标准差不能为负")
        if not self.ci_low <= self.mean <= self.ci_high:
            raise ValueError("均值必须位于置信区间内")
        return self

    @property
    def ci95(self) -> Tuple[float, float]:
        return (self.ci_low, self.ci_high)


class CheckRow(BaseModel):
    """验收套件的一行结果"""

    model_config = ConfigDict(frozen=True)

    label: str
    estimate: float
    std_error: float
    n: int
    seed: int
    comparator: float
    passed: bool

    @classmethod
    def from_report(cls, report: McReport, comparator: float, passed: bool) -> "CheckRow":
        return cls(
            label=report.label,
            estimate=report.estimate,
            std_error=report.std_error,
            n=report.n_samples,
            seed=report.seed,
            comparator=comparator,
            passed=passed,
        )
