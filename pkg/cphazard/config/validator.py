"""
配置验证器

发现问题直接抛出 ConfigError，field 为点分路径。
"""

import math
from pathlib import Path

from ..core.exceptions import ConfigError, DomainError
from ..models.constants import Experiment
from .configs import RunConfig
from .logging_config import LEVEL_NAMES


def _positive(field: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise ConfigError(field, f"必须为正数: {value}")


def _unit_interval(field: str, value: float) -> None:
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise ConfigError(field, f"必须位于 [0, 1]: {value}")


class ConfigValidator:
    """配置验证器"""

    def validate(self, config: RunConfig) -> None:
        """逐节验证"""
        self._validate_top_level(config)
        self._validate_params(config)
        self._validate_run(config)
        self._validate_pricing(config)
        self._validate_verify(config)
        self._validate_sensitivity(config)
        self._validate_logging(config)

    def _validate_top_level(self, config: RunConfig) -> None:
        if config.experiment not in Experiment.ALL:
            raise ConfigError("experiment", f"未知实验 {config.experiment!r}")
        output_dir = Path(config.output_dir)
        if output_dir.exists() and not output_dir.is_dir():
            raise ConfigError("output_dir", f"不是目录: {output_dir}")
        if config.experiment == Experiment.CALIBRATE and not config.input_path:
            raise ConfigError("input_path", "calibrate 需要输入的利率序列文件")

    def _validate_params(self, config: RunConfig) -> None:
        try:
            config.params.to_model()
        except DomainError as e:
            raise ConfigError(f"params.{e.field}", e.message) from e

    def _validate_run(self, config: RunConfig) -> None:
        run = config.run
        _positive("run.horizon", run.horizon)
        _positive("run.dt", run.dt)
        if run.dt > run.horizon:
            raise ConfigError("run.dt", f"步长 {run.dt} 大于模拟区间 {run.horizon}")
        if run.n_paths < 1:
            raise ConfigError("run.n_paths", f"至少为 1: {run.n_paths}")
        if run.seed < 0:
            raise ConfigError("run.seed", f"不能为负: {run.seed}")
        if run.workers < 1:
            raise ConfigError("run.workers", f"至少为 1: {run.workers}")
        if run.batch_size < 1:
            raise ConfigError("run.batch_size", f"至少为 1: {run.batch_size}")

    def _validate_pricing(self, config: RunConfig) -> None:
        pricing = config.pricing
        _positive("pricing.rate", pricing.rate)
        _positive("pricing.maturity", pricing.maturity)
        if not pricing.deltas:
            raise ConfigError("pricing.deltas", "至少需要一个回收比例")
        for delta in pricing.deltas:
            _unit_interval("pricing.deltas", delta)
        if pricing.coupon < 0.0:
            raise ConfigError("pricing.coupon", f"不能为负: {pricing.coupon}")
        _unit_interval("pricing.cds_recovery", pricing.cds_recovery)
        if pricing.cds_recovery == 1.0:
            raise ConfigError("pricing.cds_recovery", "全额回收时 CDS 保护腿为 0")
        if pricing.curve_stride < 1:
            raise ConfigError("pricing.curve_stride", f"至少为 1: {pricing.curve_stride}")

    def _validate_verify(self, config: RunConfig) -> None:
        verify = config.verify
        _positive("verify.scale", verify.scale)
        _positive("verify.scheme_horizon", verify.scheme_horizon)
        if verify.scheme_paths < 1:
            raise ConfigError("verify.scheme_paths", f"至少为 1: {verify.scheme_paths}")
        if verify.jump_paths < 1:
            raise ConfigError("verify.jump_paths", f"至少为 1: {verify.jump_paths}")
        if not verify.results_file.strip():
            raise ConfigError("verify.results_file", "不能为空")

    def _validate_sensitivity(self, config: RunConfig) -> None:
        sens = config.sensitivity
        for name in ("lam", "mu1", "beta_a", "beta_b", "mu2_ab", "mu2_c", "horizon", "dt"):
            _positive(f"sensitivity.{name}", getattr(sens, name))
        if sens.dt > sens.horizon:
            raise ConfigError("sensitivity.dt", f"步长 {sens.dt} 大于模拟区间 {sens.horizon}")
        if sens.n_paths < 1:
            raise ConfigError("sensitivity.n_paths", f"至少为 1: {sens.n_paths}")
        _unit_interval("sensitivity.low", sens.low)
        _unit_interval("sensitivity.high", sens.high)
        if sens.low > sens.high:
            raise ConfigError("sensitivity.low", f"下阈值 {sens.low} 大于上阈值 {sens.high}")
        if sens.fixed_latent:
            if sens.latent_xi < 0.0 or 2.0 * sens.latent_xi > sens.horizon:
                raise ConfigError("sensitivity.latent_xi", f"需要 0 ≤ 2ξ ≤ horizon: {sens.latent_xi}")
            _positive("sensitivity.latent_theta", sens.latent_theta)
        if sens.n_traces < 0:
            raise ConfigError("sensitivity.n_traces", f"不能为负: {sens.n_traces}")
        if sens.trace_stride < 1:
            raise ConfigError("sensitivity.trace_stride", f"至少为 1: {sens.trace_stride}")

    def _validate_logging(self, config: RunConfig) -> None:
        if config.logging.level.strip().upper() not in LEVEL_NAMES:
            raise ConfigError("logging.level", f"未知日志级别 {config.logging.level!r}")
