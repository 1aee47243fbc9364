"""
内置参数预设

table2：国债利率校准的定价参数；table1：滤波比较实验的参数。
"""

from typing import Any, Dict

PRESETS: Dict[str, Dict[str, Any]] = {
    "table2": {
        "params.pi0": 0.0,
        "params.lam": 0.25,
        "params.mu1": 0.0366,
        "params.mu2": 0.1148,
        "params.beta": 0.15,
        "run.horizon": 10.0,
        "pricing.rate": 0.0263,
        "pricing.maturity": 10.0,
    },
    "table1": {
        "params.pi0": 0.0,
        "params.lam": 0.06,
        "params.mu1": 0.02,
        "params.mu2": 0.22,
        "params.beta": 1.0,
        "run.horizon": 60.0,
        "run.dt": 1e-2,
        "pricing.maturity": 60.0,
    },
}

DEFAULT_PRESET = "table2"
