"""
枚举常量
"""


class FilterScheme:
    """滤波器数值方案"""

    DIRECT_SDE = "direct-sde"
    ODDS_RATIO = "odds-ratio"


class ContractKind:
    """合约类型"""

    COUPON_BOND = "coupon-bond"
    CDS = "cds"
    ZCB = "zcb"

    ALL = (COUPON_BOND, CDS, ZCB)


class Experiment:
    """run_experiment 可分派的实验名称"""

    SIMULATE = "simulate"
    FILTER = "filter"
    PRICE = "price"
    VERIFY = "verify"
    SENSITIVITY = "sensitivity"
    CALIBRATE = "calibrate"

    ALL = (SIMULATE, FILTER, PRICE, VERIFY, SENSITIVITY, CALIBRATE)


class Regime:
    """InfoState 的信息类型"""

    FULL = "full"
    PARTIAL = "partial"
