"""cphazard/manager/experiments.py 的单元测试。"""

from pathlib import Path

import pandas as pd
import pytest

from cphazard.config.configs import RunConfig
from cphazard.core.exceptions import IoError
from cphazard.core.exit_codes import ExitCode
from cphazard.config.manager import config_hash
from cphazard.manager.experiments import run_experiment
from cphazard.models.reports import CheckRow
from cphazard.utils.csv_io import read_header


def _frame(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


class TestSimulateExperiment:
    """场景文件。"""

    def test_files_and_determinism(self, run_config: RunConfig) -> None:
        run_config.experiment = "simulate"
        run_config.run.n_paths = 2
        first = run_experiment(run_config)
        assert first.exit_code == ExitCode.SUCCESS
        assert [p.name for p in first.files] == ["scenario_0000.csv", "scenario_0001.csv"]
        contents = [p.read_bytes() for p in first.files]

        second = run_experiment(run_config)
        assert [p.read_bytes() for p in second.files] == contents

    def test_header_hash(self, run_config: RunConfig) -> None:
        run_config.experiment = "simulate"
        outcome = run_experiment(run_config)
        header = read_header(outcome.files[0])
        assert len(header["config_hash"]) == 64


class TestFilterExperiment:
    """滤波文件。"""

    def test_columns(self, run_config: RunConfig) -> None:
        run_config.experiment = "filter"
        outcome = run_experiment(run_config)
        assert [p.name for p in outcome.files] == ["filter_0000.csv", "filter_diag_0000.csv"]
        frame = _frame(outcome.files[0])
        assert list(frame.columns) == ["t", "pi_g", "pi_f", "mu_hat_g", "mu_hat_f"]
        assert frame["pi_g"].between(0.0, 1.0).all()
        diag = _frame(outcome.files[1])
        assert list(diag.columns) == ["t", "H", "mu", "pi_odds"]
        assert read_header(outcome.files[1])["config_hash"] == read_header(outcome.files[0])["config_hash"]
        assert len(outcome.summary) == 1


class TestPriceExperiment:
    """定价文件。"""

    def test_price_files(self, run_config: RunConfig) -> None:
        run_config.experiment = "price"
        outcome = run_experiment(run_config)
        names = {p.name for p in outcome.files}
        assert {"price_curve_delta0.csv", "price_curve_delta0.5.csv", "prices.csv", "survival_curve.csv"} <= names

        curve = _frame(Path(run_config.output_dir) / "price_curve_delta0.csv")
        assert curve["t"].iloc[0] == 0.0
        assert curve["price_partial"].iloc[0] == pytest.approx(0.3350, abs=5e-4)
        half = _frame(Path(run_config.output_dir) / "price_curve_delta0.5.csv")
        assert half["price_partial"].iloc[0] == pytest.approx(0.5832, abs=1e-3)

        prices = _frame(Path(run_config.output_dir) / "prices.csv")
        assert "cds_fair_spread" in prices["instrument"].tolist()

        survival = _frame(Path(run_config.output_dir) / "survival_curve.csv")
        assert survival["survival"].iloc[-1] == pytest.approx(0.4358, abs=5e-4)


class TestVerifyExperiment:
    """验收结果文件的位置与失败项。"""

    @pytest.fixture
    def failing_suite(self, monkeypatch: pytest.MonkeyPatch) -> None:
        rows = [
            CheckRow(label="ok", estimate=1.0, std_error=0.0, n=2, seed=0, comparator=1.0, passed=True),
            CheckRow(label="bad", estimate=0.0, std_error=0.0, n=2, seed=0, comparator=1.0, passed=False),
        ]
        monkeypatch.setattr("cphazard.manager.experiments.AcceptanceSuite.run", lambda self: rows)

    def test_default_location_overwritten(self, run_config: RunConfig, failing_suite: None) -> None:
        run_config.experiment = "verify"
        target = Path(run_config.output_dir) / "verify_results.csv"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("stale\n", encoding="utf-8")
        outcome = run_experiment(run_config)
        assert outcome.exit_code == ExitCode.ACCEPTANCE_FAILED
        assert outcome.failed == ["bad"]
        assert outcome.files == [target]
        assert "stale" not in target.read_text(encoding="utf-8")
        assert _frame(target)["label"].tolist() == ["ok", "bad"]

    def test_explicit_results_path(self, run_config: RunConfig, temp_workspace: Path, failing_suite: None) -> None:
        run_config.experiment = "verify"
        before = config_hash(run_config)
        custom = temp_workspace / "runs" / "first.csv"
        run_config.verify.results_file = str(custom)
        assert config_hash(run_config) == before
        outcome = run_experiment(run_config)
        assert outcome.files == [custom]
        assert not (Path(run_config.output_dir) / "verify_results.csv").exists()

    def test_relative_results_path(self, run_config: RunConfig, failing_suite: None) -> None:
        run_config.experiment = "verify"
        run_config.verify.results_file = "second.csv"
        outcome = run_experiment(run_config)
        assert outcome.files == [Path(run_config.output_dir) / "second.csv"]


class TestCalibrateExperiment:
    """利率校准。"""

    def test_calibration_file(self, run_config: RunConfig, temp_workspace: Path) -> None:
        series = temp_workspace / "rates.csv"
        series.write_text("rate\n0.02\n0.04\n", encoding="utf-8")
        run_config.experiment = "calibrate"
        run_config.input_path = str(series)
        outcome = run_experiment(run_config)
        frame = _frame(outcome.files[0])
        assert frame["mean"].iloc[0] == pytest.approx(0.03)
        assert frame["ci_low"].iloc[0] == pytest.approx(0.0104, abs=1e-4)
        assert frame["n_obs"].iloc[0] == 2


@pytest.mark.slow
class TestSensitivityExperiment:
    """敏感性文件。"""

    def test_files(self, run_config: RunConfig) -> None:
        run_config.experiment = "sensitivity"
        run_config.sensitivity.n_paths = 50
        run_config.sensitivity.dt = 0.1
        run_config.sensitivity.n_traces = 2
        outcome = run_experiment(run_config)
        names = [p.name for p in outcome.files]
        assert names[0] == "sensitivity.csv"
        assert "sensitivity_traces_caseA.csv" in names
        frame = _frame(outcome.files[0])
        assert frame["label"].tolist() == ["caseA", "caseA", "caseB", "caseB", "caseC", "caseC"]
        assert frame["xi_multiple"].tolist() == [0.5, 2.0] * 3


class TestOutputErrors:
    """输出目录不可用。"""

    def test_output_under_file(self, run_config: RunConfig, temp_workspace: Path) -> None:
        blocker = temp_workspace / "blocker"
        blocker.write_text("x", encoding="utf-8")
        run_config.output_dir = str(blocker / "out")
        run_config.experiment = "simulate"
        with pytest.raises(IoError):
            run_experiment(run_config)
