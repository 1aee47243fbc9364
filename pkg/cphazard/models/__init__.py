from .constants import ContractKind, Experiment, FilterScheme, Regime
from .contract import ContractSpec, MarketFactorHooks
from .info_state import InfoState
from .params import DEFAULT_DEGENERACY_TOL, ModelParams, new_params
from .paths import FilterPath, ScenarioPath
from .reports import CheckRow, McReport, MseRow, RateSeriesStats, SensitivityResult

__all__ = [
    "ContractKind",
    "Experiment",
    "FilterScheme",
    "Regime",
    "ContractSpec",
    "MarketFactorHooks",
    "InfoState",
    "DEFAULT_DEGENERACY_TOL",
    "ModelParams",
    "new_params",
    "FilterPath",
    "ScenarioPath",
    "CheckRow",
    "McReport",
    "MseRow",
    "RateSeriesStats",
    "SensitivityResult",
]
