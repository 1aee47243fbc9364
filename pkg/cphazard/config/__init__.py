"""
配置管理模块
"""

from .configs import ParamsConfig, PricingConfig, RunConfig, RunSection, SensitivityConfig, VerifyConfig
from .logging_config import LoggingConfig, get_log_manager, get_logger, init_log_manager
from .manager import ConfigManager, config_hash, flatten, read_config_file, set_value
from .presets import DEFAULT_PRESET, PRESETS
from .validator import ConfigValidator

__all__ = [
    "ParamsConfig",
    "PricingConfig",
    "RunConfig",
    "RunSection",
    "SensitivityConfig",
    "VerifyConfig",
    "LoggingConfig",
    "get_log_manager",
    "get_logger",
    "init_log_manager",
    "ConfigManager",
    "config_hash",
    "flatten",
    "read_config_file",
    "set_value",
    "DEFAULT_PRESET",
    "PRESETS",
    "ConfigValidator",
]
