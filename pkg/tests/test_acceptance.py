"""cphazard/manager/acceptance.py 的单元测试。"""

import pytest

from cphazard.config.configs import RunConfig
from cphazard.manager.acceptance import (
    CASE_C_BAND,
    MIN_SAMPLES,
    SCHEME_RATIO_BAND,
    SENSITIVITY_LABELS,
    AcceptanceSuite,
    sensitivity_variants,
)


@pytest.fixture
def small_suite(run_config: RunConfig) -> AcceptanceSuite:
    """样本数压到下限的套件。"""
    run_config.verify.scale = 1e-3
    return AcceptanceSuite(run_config)


class TestSuiteSetup:
    """样本缩放与变体构造。"""

    def test_sample_floor(self, small_suite: AcceptanceSuite) -> None:
        assert small_suite.samples(1_000_000) == MIN_SAMPLES
        assert small_suite.samples(10) == MIN_SAMPLES

    def test_sample_scaling(self, run_config: RunConfig) -> None:
        run_config.verify.scale = 0.5
        assert AcceptanceSuite(run_config).samples(100_000) == 50_000

    def test_sensitivity_variants(self, run_config: RunConfig) -> None:
        case_a, case_b, case_c = sensitivity_variants(run_config)
        assert (case_a.beta, case_a.mu2) == (1.0, 0.12)
        assert (case_b.beta, case_b.mu2) == (2.0, 0.12)
        assert (case_c.beta, case_c.mu2) == (2.0, 0.22)
        assert case_a.lam == 0.06 and case_a.mu1 == 0.02
        assert SENSITIVITY_LABELS == ("caseA", "caseB", "caseC")


class TestDeterministicChecks:
    """不依赖随机数的检查在默认参数下全部通过。"""

    def test_generator(self, small_suite: AcceptanceSuite) -> None:
        residual, perturbed = small_suite.check_generator()
        assert residual.passed
        assert perturbed.passed
        assert perturbed.estimate >= perturbed.comparator

    def test_density(self, small_suite: AcceptanceSuite) -> None:
        rows = small_suite.check_density()
        assert [row.label for row in rows] == ["density_mass", "density_derivative"]
        assert all(row.passed for row in rows)

    def test_degeneracy(self, small_suite: AcceptanceSuite) -> None:
        (row,) = small_suite.check_degeneracy()
        assert row.passed
        assert row.estimate <= 1e-6

    def test_determinism(self, small_suite: AcceptanceSuite) -> None:
        (row,) = small_suite.check_determinism()
        assert row.passed
        assert row.estimate == row.comparator


class TestStatisticalChecks:
    """统计检查的行结构。"""

    def test_survival_rows(self, small_suite: AcceptanceSuite) -> None:
        mc_row, quad_row = small_suite.check_survival()
        assert mc_row.n == MIN_SAMPLES
        assert mc_row.seed == 18
        assert mc_row.comparator == pytest.approx(0.435774, abs=2e-6)
        assert quad_row.passed

    def test_price_rows(self, small_suite: AcceptanceSuite) -> None:
        rows = small_suite.check_prices()
        labels = [row.label for row in rows]
        assert labels[:4] == ["dzcb(delta=0)", "dzcb_quadrature(delta=0)", "dzcb(delta=0.5)", "dzcb_quadrature(delta=0.5)"]
        assert len(rows) == 6
        assert rows[1].passed and rows[3].passed
        assert rows[0].comparator == pytest.approx(0.3350, abs=5e-4)
        assert rows[2].comparator == pytest.approx(0.5832, abs=1e-3)

    def test_sensitivity_orderings(self, run_config: RunConfig) -> None:
        """固定潜变量下 Case A 的上阈值比例高于 Case B，Case C 至少 90% 路径低于下阈值"""
        run_config.sensitivity.n_paths = 400
        ab_row, c_row = AcceptanceSuite(run_config).check_sensitivity()
        assert ab_row.label == "sensitivity_AB_above"
        assert ab_row.estimate > ab_row.comparator
        assert c_row.label == "sensitivity_C_below"
        assert c_row.estimate >= CASE_C_BAND
        assert c_row.passed == (c_row.estimate >= c_row.comparator)

    def test_scheme_ratio_in_band(self, run_config: RunConfig) -> None:
        """Milstein 直接格式与几率比格式之差的收缩比落在 [1.5, 2.5]"""
        run_config.verify.scheme_horizon = 0.5
        run_config.verify.scale = 0.1
        gap_row, ratio_row = AcceptanceSuite(run_config).check_scheme()
        assert gap_row.passed
        low, high = SCHEME_RATIO_BAND
        assert (low, high) == (1.5, 2.5)
        assert low <= ratio_row.estimate <= high
        assert ratio_row.passed

    @pytest.mark.slow
    def test_jump_identity(self, small_suite: AcceptanceSuite) -> None:
        (row,) = small_suite.check_jump_identity()
        assert row.passed


@pytest.mark.integration
class TestFullSuite:
    """完整验收套件（耗时较长，默认不运行）。"""

    def test_all_checks_pass(self) -> None:
        rows = AcceptanceSuite(RunConfig()).run()
        failed = [row.label for row in rows if not row.passed]
        assert failed == []
