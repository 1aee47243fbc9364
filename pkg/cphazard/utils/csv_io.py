"""
CSV 结果文件

每个文件以 ``# config_hash=<hex>`` 开头，随后是 ``# key=value`` 元数据行，
然后是带表头的数据；浮点数一律输出 17 位有效数字。
"""

from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..core.exceptions import DomainError, IoError
from ..models.paths import FilterPath, ScenarioPath
from ..models.reports import CheckRow, SensitivityResult

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def format_value(value: Any) -> str:
    """元数据取值的文本形式"""
    if value is None:
        return "none"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def write_table(
    path: PathLike,
    frame: pd.DataFrame,
    config_hash: str,
    metadata: Optional[Mapping[str, Any]] = None,
) -> Path:
    """写出带 config_hash 头的表格

    Raises:
        IoError: 目录无法创建或文件不可写
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# config_hash={config_hash}\n")
            for key, value in (metadata or {}).items():
                fh.write(f"# {key}={format_value(value)}\n")
            frame.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise IoError(str(path), f"写入失败: {e}") from e
    return path


def scenario_frame(scenario: ScenarioPath) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "t": scenario.grid,
            "B": scenario.brownian,
            "Y": scenario.y_obs,
            "H": scenario.h_ind.astype(np.int64),
            "mu": scenario.mu_path,
        }
    )


def write_scenario(path: PathLike, scenario: ScenarioPath, config_hash: str) -> Path:
    """场景：列 t,B,Y,H,mu，元数据 xi/theta/tau/seed"""
    metadata = {"xi": scenario.xi, "theta": scenario.theta, "tau": scenario.tau, "seed": scenario.seed}
    return write_table(path, scenario_frame(scenario), config_hash, metadata)


FILTER_COLUMNS = ("t", "pi_g", "pi_f", "mu_hat_g", "mu_hat_f")


def write_filter(path: PathLike, scenario: ScenarioPath, filter_path: FilterPath, config_hash: str) -> Path:
    """滤波轨迹：列固定为 t,pi_g,pi_f,mu_hat_g,mu_hat_f，元数据 scheme/xi/tau/seed

    Raises:
        DomainError: 缺少 G^Y 或 F^Y 轨迹
    """
    values = (filter_path.pi_g, filter_path.pi_f, filter_path.mu_hat_g, filter_path.mu_hat_f)
    if any(v is None for v in values):
        raise DomainError("filter_path", "需要 G^Y 与 F^Y 两条轨迹")
    frame = pd.DataFrame(dict(zip(FILTER_COLUMNS, (scenario.grid,) + values)))
    metadata = {
        "scheme": filter_path.scheme,
        "xi": scenario.xi,
        "tau": scenario.tau,
        "seed": scenario.seed,
    }
    return write_table(path, frame, config_hash, metadata)


def write_filter_diagnostics(
    path: PathLike,
    scenario: ScenarioPath,
    config_hash: str,
    odds_path: Optional[FilterPath] = None,
) -> Path:
    """滤波对照文件：列 t,H,mu，可选附几率比格式的 pi_odds"""
    frame = pd.DataFrame({"t": scenario.grid, "H": scenario.h_ind.astype(np.int64), "mu": scenario.mu_path})
    if odds_path is not None and odds_path.pi_g is not None:
        frame["pi_odds"] = odds_path.pi_g
    return write_table(path, frame, config_hash, {"xi": scenario.xi, "tau": scenario.tau, "seed": scenario.seed})


def write_rows(
    path: PathLike,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config_hash: str,
    metadata: Optional[Mapping[str, Any]] = None,
) -> Path:
    """任意行数据"""
    return write_table(path, pd.DataFrame(list(rows), columns=list(columns)), config_hash, metadata)


RESULT_COLUMNS = ("label", "estimate", "std_error", "n", "seed", "comparator", "pass")


def write_results(path: PathLike, rows: Sequence[CheckRow], config_hash: str) -> Path:
    """验收结果：label,estimate,std_error,n,seed,comparator,pass

    目标文件已存在时整体覆盖，同一配置重复运行得到逐字节相同的文件；
    需要保留多次结果时由调用方给出不同的 path（verify.results_file）。
    """
    frame = pd.DataFrame(
        [(r.label, r.estimate, r.std_error, r.n, r.seed, r.comparator, "true" if r.passed else "false") for r in rows],
        columns=list(RESULT_COLUMNS),
    )
    return write_table(path, frame, config_hash)


def write_sensitivity(path: PathLike, results: Sequence[SensitivityResult], config_hash: str) -> Path:
    """每个 (变体, ξ 倍数) 一行"""
    rows = []
    for result in results:
        skipped = result.skipped.count if result.skipped else 0
        for multiple, below, above in zip(result.times, result.fractions_below, result.fractions_above):
            rows.append((result.label, result.beta, result.mu2, multiple, below, above, result.n_paths, skipped))
    columns = ["label", "beta", "mu2", "xi_multiple", "fraction_below", "fraction_above", "n_paths", "skipped"]
    return write_table(path, pd.DataFrame(rows, columns=columns), config_hash)


def write_traces(
    path: PathLike,
    times: np.ndarray,
    traces: np.ndarray,
    config_hash: str,
    metadata: Optional[Mapping[str, Any]] = None,
) -> Path:
    """Π 轨迹：列 t,path0,path1,…"""
    frame = pd.DataFrame({"t": times})
    for column in range(traces.shape[1]):
        frame[f"path{column}"] = traces[:, column]
    return write_table(path, frame, config_hash, metadata)


def read_header(path: PathLike) -> Mapping[str, str]:
    """读取文件开头的 ``# key=value`` 行"""
    meta = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition("=")
            meta[key] = value
    return meta
