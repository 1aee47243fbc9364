"""
利率序列统计

用于从月度短期利率序列估计常数利率 r 及其 95% 置信区间。
"""

import math
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from ..config.logging_config import get_logger
from ..core.exceptions import DataError
from ..models.reports import RateSeriesStats

logger = get_logger(__name__)

Z_95 = 1.96


def estimate_rate_stats(series: Sequence[float]) -> RateSeriesStats:
    """样本均值、样本标准差（n−1）与 mean ± 1.96·sd/√n

    Raises:
        DataError: 序列为空、少于两个观测或含 NaN/无穷
    """
    values = np.asarray(series, dtype=np.float64)
    if values.size == 0:
        raise DataError("利率序列为空")
    if not np.all(np.isfinite(values)):
        raise DataError("利率序列含有 NaN 或无穷值")
    if values.size < 2:
        raise DataError(f"至少需要两个观测，实际为 {values.size}")

    n = int(values.size)
    mean = math.fsum(values.tolist()) / n
    std_dev = float(np.std(values, ddof=1))
    half = Z_95 * std_dev / math.sqrt(n)
    return RateSeriesStats(mean=mean, std_dev=std_dev, ci_low=mean - half, ci_high=mean + half, n_obs=n)


def read_rate_series(path: Union[str, Path]) -> List[float]:
    """读取利率 CSV：取最后一列（日期列被忽略），首行非数值时视为表头

    Raises:
        DataError: 文件为空或含无法解析的数值
    """
    try:
        frame = pd.read_csv(path, header=None, comment="#", dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path}: 文件为空") from e
    column = frame.iloc[:, -1].str.strip()
    values = pd.to_numeric(column, errors="coerce")
    if len(values) and math.isnan(values.iloc[0]):
        logger.debug(f"{path}: 首行视为表头 {column.iloc[0]!r}")
        column, values = column.iloc[1:], values.iloc[1:]
    bad = values.isna()
    if bad.any():
        raise DataError(f"{path}: 无法解析的数值 {column[bad].iloc[0]!r}")
    return [float(v) for v in values]
