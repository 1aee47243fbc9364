"""
配置类定义
"""

from dataclasses import dataclass, field
from typing import List, Optional

from ..models.constants import Experiment
from ..models.params import DEFAULT_DEGENERACY_TOL, ModelParams, new_params
from .logging_config import LoggingConfig


@dataclass
class ParamsConfig:
    """模型参数（默认即 table2 预设）"""

    pi0: float = 0.0
    lam: float = 0.25
    mu1: float = 0.0366
    mu2: float = 0.1148
    beta: float = 0.15
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL

    def to_model(self) -> ModelParams:
        return new_params(self.pi0, self.lam, self.mu1, self.mu2, self.beta, self.degeneracy_tol)


@dataclass
class RunSection:
    """模拟控制"""

    horizon: float = 10.0
    dt: float = 1e-3
    n_paths: int = 1
    seed: int = 18
    workers: int = 1  # 不影响结果，不计入 config_hash
    batch_size: int = 5000
    milstein: bool = False  # 直接格式是否加 Milstein 修正


@dataclass
class PricingConfig:
    """定价实验"""

    rate: float = 0.0263
    maturity: float = 10.0
    deltas: List[float] = field(default_factory=lambda: [0.0, 0.5])
    coupon: float = 0.03
    cds_recovery: float = 0.4  # CDS 违约时的回收率，保护 = 1 − 回收率
    curve_stride: int = 10  # 价格曲线每隔多少个网格节点输出一行


@dataclass
class VerifyConfig:
    """验收套件"""

    scale: float = 1.0  # 样本数乘数，下限 1000
    scheme_horizon: float = 2.0
    scheme_paths: int = 100
    jump_paths: int = 200
    results_file: str = "verify_results.csv"  # 相对路径按 output_dir 解析，已存在时覆盖


@dataclass
class SensitivityConfig:
    """阈值敏感性实验（Case A/B/C）"""

    lam: float = 0.06
    mu1: float = 0.02
    beta_a: float = 1.0
    beta_b: float = 2.0
    mu2_ab: float = 0.12
    mu2_c: float = 0.22
    horizon: float = 60.0
    dt: float = 1e-2
    n_paths: int = 1000
    low: float = 0.3
    high: float = 0.95
    fixed_latent: bool = True  # 所有路径与变体共用同一个 (ξ, Θ)
    latent_xi: float = 17.51
    latent_theta: float = 0.704
    n_traces: int = 5
    trace_stride: int = 10


@dataclass
class RunConfig:
    """主配置类"""

    experiment: str = Experiment.VERIFY
    preset: str = "table2"
    output_dir: str = "./output"
    input_path: Optional[str] = None
    params: ParamsConfig = field(default_factory=ParamsConfig)
    run: RunSection = field(default_factory=RunSection)
    pricing: PricingConfig = field(default_factory=PricingConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    sensitivity: SensitivityConfig = field(default_factory=SensitivityConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @property
    def model_params(self) -> ModelParams:
        return self.params.to_model()
