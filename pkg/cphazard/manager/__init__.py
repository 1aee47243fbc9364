"""
管理器模块：批量模拟、蒙特卡洛预言机、验收套件与实验调度
"""

from .acceptance import AcceptanceSuite
from .experiments import ExperimentOutcome, ExperimentRunner, run_experiment
from .montecarlo import (
    calibrate_bias_slope,
    filter_unbiasedness,
    jump_identity_max_error,
    mc_fair_spread,
    mc_mse_compare,
    mc_price_check,
    mc_tower_check,
    mc_unconditional_survival,
    scheme_gap,
    sensitivity_study,
)

__all__ = [
    "AcceptanceSuite",
    "ExperimentOutcome",
    "ExperimentRunner",
    "run_experiment",
    "calibrate_bias_slope",
    "filter_unbiasedness",
    "jump_identity_max_error",
    "mc_fair_spread",
    "mc_mse_compare",
    "mc_price_check",
    "mc_tower_check",
    "mc_unconditional_survival",
    "scheme_gap",
    "sensitivity_study",
]
