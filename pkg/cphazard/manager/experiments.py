"""
实验调度

run_experiment 按 config.experiment 分派到对应实验，写出 CSV 并返回退出码。
所有文件名与内容只由配置决定，同一配置重复运行得到逐字节相同的文件。
"""

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.configs import RunConfig
from ..config.logging_config import get_logger
from ..config.manager import config_hash
from ..core.analytics import survival_curve
from ..core.exceptions import IoError
from ..core.exit_codes import ExitCode
from ..core.filters import run_filter_odds, run_filters
from ..core.model import derive_seed, simulate_seeded
from ..core.pricing import contract_for_kind, fair_spread, price_curve, price_dzcb_full, price_dzcb_partial, price_general
from ..models.constants import ContractKind, Experiment
from ..models.info_state import InfoState
from ..models.paths import ScenarioPath
from ..utils.csv_io import (
    write_filter,
    write_filter_diagnostics,
    write_results,
    write_rows,
    write_scenario,
    write_sensitivity,
    write_traces,
)
from ..utils.rate_stats import estimate_rate_stats, read_rate_series
from .acceptance import SENSITIVITY_LABELS, AcceptanceSuite, sensitivity_variants
from .montecarlo import sensitivity_study, sensitivity_traces
from .progress import ProgressCallback, create_silent_progress_callback

logger = get_logger(__name__)

# 生存曲线的输出点数
SURVIVAL_CURVE_POINTS = 101


@dataclass
class ExperimentOutcome:
    """实验结果：退出码、写出的文件、终端摘要与未通过的验收项"""

    exit_code: int
    files: List[Path] = field(default_factory=list)
    headers: Sequence[str] = ()
    summary: List[Sequence[Any]] = field(default_factory=list)
    failed: List[str] = field(default_factory=list)


class ExperimentRunner:
    """
    实验执行器
    负责准备输出目录、计算 config_hash 并调用各实验
    """

    def __init__(self, config: RunConfig, progress: Optional[ProgressCallback] = None) -> None:
        self.config = config
        self.params = config.model_params
        self.progress = progress or create_silent_progress_callback()
        self.hash = config_hash(config)
        self.output_dir = Path(config.output_dir)
        self._handlers: Dict[str, Callable[[], ExperimentOutcome]] = {
            Experiment.SIMULATE: self.simulate,
            Experiment.FILTER: self.filter,
            Experiment.PRICE: self.price,
            Experiment.VERIFY: self.verify,
            Experiment.SENSITIVITY: self.sensitivity,
            Experiment.CALIBRATE: self.calibrate,
        }

    def _prepare_output(self) -> None:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoError(str(self.output_dir), f"无法创建输出目录: {e}") from e
        if not os.access(self.output_dir, os.W_OK):
            raise IoError(str(self.output_dir), "输出目录不可写")

    def run(self) -> ExperimentOutcome:
        self._prepare_output()
        logger.info(f"开始实验 {self.config.experiment}，config_hash={self.hash}")
        outcome = self._handlers[self.config.experiment]()
        logger.info(f"实验 {self.config.experiment} 完成，写出 {len(outcome.files)} 个文件")
        return outcome

    def _scenario(self, index: int, horizon: Optional[float] = None) -> ScenarioPath:
        run = self.config.run
        return simulate_seeded(self.params, horizon or run.horizon, run.dt, derive_seed(run.seed, index))

    def simulate(self) -> ExperimentOutcome:
        """n_paths 个场景，每个一个文件"""
        outcome = ExperimentOutcome(ExitCode.SUCCESS, headers=("path", "xi", "tau", "seed", "file"))
        for i in range(self.config.run.n_paths):
            scenario = self._scenario(i)
            path = write_scenario(self.output_dir / f"scenario_{i:04d}.csv", scenario, self.hash)
            outcome.files.append(path)
            outcome.summary.append((i, scenario.xi, scenario.tau, scenario.seed, path.name))
            self.progress("simulate", i + 1, self.config.run.n_paths)
        return outcome

    def filter(self) -> ExperimentOutcome:
        """G^Y/F^Y 滤波轨迹；真实 H、μ 与几率比格式 (π < 1) 另写对照文件"""
        outcome = ExperimentOutcome(ExitCode.SUCCESS, headers=("path", "xi", "tau", "pi_T", "max_scheme_gap", "file"))
        for i in range(self.config.run.n_paths):
            scenario = self._scenario(i)
            path_gf = run_filters(self.params, scenario, milstein=self.config.run.milstein)
            odds = run_filter_odds(self.params, scenario) if self.params.pi0 < 1.0 else None
            gap = math.nan
            if odds is not None and odds.pi_g is not None and path_gf.pi_g is not None:
                gap = float(np.max(np.abs(path_gf.pi_g - odds.pi_g)))
            path = write_filter(self.output_dir / f"filter_{i:04d}.csv", scenario, path_gf, self.hash)
            diag = write_filter_diagnostics(self.output_dir / f"filter_diag_{i:04d}.csv", scenario, self.hash, odds)
            outcome.files.extend((path, diag))
            pi_end = float(path_gf.pi_g[-1]) if path_gf.pi_g is not None else math.nan
            outcome.summary.append((i, scenario.xi, scenario.tau, pi_end, gap, path.name))
            self.progress("filter", i + 1, self.config.run.n_paths)
        return outcome

    def price(self) -> ExperimentOutcome:
        """沿一个场景的部分/完全信息价格曲线，0 时刻价格表与生存曲线"""
        pricing = self.config.pricing
        maturity, rate = pricing.maturity, pricing.rate
        outcome = ExperimentOutcome(ExitCode.SUCCESS, headers=("instrument", "delta", "value"))

        scenario = self._scenario(0, horizon=maturity)
        path_g = run_filters(self.params, scenario, milstein=self.config.run.milstein)
        meta = {"xi": scenario.xi, "tau": scenario.tau, "seed": scenario.seed, "rate": rate, "maturity": maturity}
        for delta in pricing.deltas:
            rows = price_curve(self.params, scenario, path_g, rate, delta, maturity, stride=pricing.curve_stride)
            name = f"price_curve_delta{delta:g}.csv"
            outcome.files.append(
                write_rows(self.output_dir / name, ("t", "price_partial", "price_full", "pi"), rows, self.hash, meta)
            )

        state = InfoState.partial(0.0, maturity, self.params.pi0)
        table: List[Tuple[str, float, float]] = []
        for delta in pricing.deltas:
            table.append(("dzcb_partial", delta, price_dzcb_partial(self.params, rate, delta, state)))
            full = InfoState.full(0.0, maturity, xi_after_t=self.params.pi0 < 1.0)
            table.append(("dzcb_full_pre_change", delta, price_dzcb_full(self.params, rate, delta, full)))
        bond = contract_for_kind(ContractKind.COUPON_BOND, maturity, rate, 0.0, pricing.coupon, 0.0)
        table.append(("coupon_bond", 0.0, price_general(self.params, bond, state)))
        cds = contract_for_kind(ContractKind.CDS, maturity, rate, pricing.cds_recovery, 0.0, 0.0)
        table.append(("cds_fair_spread", pricing.cds_recovery, fair_spread(self.params, cds, state)))
        outcome.files.append(
            write_rows(self.output_dir / "prices.csv", ("instrument", "delta", "value"), table, self.hash, {"rate": rate})
        )
        outcome.summary.extend(table)

        s_grid = np.linspace(0.0, maturity, SURVIVAL_CURVE_POINTS).tolist()
        curve = survival_curve(self.params, state, s_grid)
        outcome.files.append(
            write_rows(self.output_dir / "survival_curve.csv", ("s", "survival", "density"), curve, self.hash)
        )
        return outcome

    def verify(self) -> ExperimentOutcome:
        """验收套件；任一行未通过时退出码为 2"""
        rows = AcceptanceSuite(self.config, self.progress).run()
        results_file = Path(self.config.verify.results_file)
        target = results_file if results_file.is_absolute() else self.output_dir / results_file
        path = write_results(target, rows, self.hash)
        failed = [row.label for row in rows if not row.passed]
        if failed:
            logger.warning(f"{len(failed)} 项验收未通过: {', '.join(failed)}")
        return ExperimentOutcome(
            ExitCode.ACCEPTANCE_FAILED if failed else ExitCode.SUCCESS,
            files=[path],
            failed=failed,
            headers=("label", "estimate", "std_error", "n", "comparator", "pass"),
            summary=[(r.label, r.estimate, r.std_error, r.n, r.comparator, r.passed) for r in rows],
        )

    def sensitivity(self) -> ExperimentOutcome:
        """Case A/B/C 阈值比例与若干条 Π 轨迹"""
        sens = self.config.sensitivity
        seed = self.config.run.seed
        variants = sensitivity_variants(self.config)
        latent = (sens.latent_xi, sens.latent_theta) if sens.fixed_latent else None
        results = sensitivity_study(
            variants,
            sens.n_paths,
            sens.dt,
            seed,
            sens.horizon,
            thresholds=(sens.low, sens.high),
            fixed_latent=latent,
            labels=SENSITIVITY_LABELS,
            batch_size=self.config.run.batch_size,
            workers=self.config.run.workers,
            progress=lambda done, total: self.progress("sensitivity", done, total),
        )
        outcome = ExperimentOutcome(
            ExitCode.SUCCESS,
            files=[write_sensitivity(self.output_dir / "sensitivity.csv", results, self.hash)],
            headers=("case", "beta", "mu2", "xi_multiple", "below", "above", "n_paths"),
        )
        for result in results:
            for multiple, below, above in zip(result.times, result.fractions_below, result.fractions_above):
                outcome.summary.append((result.label, result.beta, result.mu2, multiple, below, above, result.n_paths))

        if sens.n_traces:
            for label, params in zip(SENSITIVITY_LABELS, variants):
                times, traces, xi = sensitivity_traces(
                    params, sens.n_traces, sens.dt, seed, sens.horizon, latent, sens.trace_stride
                )
                meta = {"beta": params.beta, "mu2": params.mu2, "xi": ",".join(f"{x:.17g}" for x in xi.tolist())}
                path = self.output_dir / f"sensitivity_traces_{label}.csv"
                outcome.files.append(write_traces(path, times, traces, self.hash, meta))
        return outcome

    def calibrate(self) -> ExperimentOutcome:
        """利率序列的均值、标准差与 95% 置信区间"""
        assert self.config.input_path is not None
        stats = estimate_rate_stats(read_rate_series(self.config.input_path))
        row = (stats.mean, stats.std_dev, stats.ci_low, stats.ci_high, stats.n_obs)
        columns = ("mean", "std_dev", "ci_low", "ci_high", "n_obs")
        path = write_rows(self.output_dir / "calibration.csv", columns, [row], self.hash)
        return ExperimentOutcome(ExitCode.SUCCESS, files=[path], headers=columns, summary=[row])


def run_experiment(config: RunConfig, progress: Optional[ProgressCallback] = None) -> ExperimentOutcome:
    """按配置运行实验

    Raises:
        IoError: 输出目录不可写
        CphazardError: 各实验内部的参数或数据错误
    """
    return ExperimentRunner(config, progress).run()
