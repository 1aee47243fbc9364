"""cphazard/manager/montecarlo.py 的单元测试。

样本数远小于验收套件，容差取 4 个标准误。
"""

import math

import numpy as np
import pytest

from cphazard.core.analytics import survival_partial
from cphazard.core.exceptions import DomainError
from cphazard.core.pricing import fair_spread, price_dzcb_partial, price_general
from cphazard.manager.montecarlo import (
    filter_unbiasedness,
    jump_identity_max_error,
    mc_fair_spread,
    mc_mse_compare,
    mc_price_check,
    calibrate_bias_slopes,
    mc_tower_check,
    mc_tower_checks,
    mc_unconditional_survival,
    prior_change_probability,
    scheme_gap,
    sensitivity_study,
    sensitivity_traces,
)
from cphazard.manager.acceptance import SCHEME_RATIO_BAND
from cphazard.models.contract import ContractSpec
from cphazard.models.info_state import InfoState
from cphazard.models.params import ModelParams

RATE = 0.0263
N_SE = 4.0


def _closed_survival(params: ModelParams, horizon: float = 10.0) -> float:
    return survival_partial(params, InfoState.partial(0.0, horizon, params.pi0))


class TestSurvivalOracle:
    """无条件生存概率的暴力估计。"""

    def test_matches_closed_form(self, table2_params: ModelParams) -> None:
        report = mc_unconditional_survival(table2_params, 10.0, 40_000, seed=18)
        assert report.n_samples == 40_000
        assert report.agrees_with(_closed_survival(table2_params), N_SE)

    def test_with_atom(self, table2_params: ModelParams) -> None:
        params = table2_params.replace(pi0=0.3)
        report = mc_unconditional_survival(params, 10.0, 40_000, seed=5)
        assert report.agrees_with(_closed_survival(params), N_SE)

    def test_worker_count_does_not_change_result(self, table2_params: ModelParams) -> None:
        single = mc_unconditional_survival(table2_params, 10.0, 5000, seed=3, batch_size=1000, workers=1)
        multi = mc_unconditional_survival(table2_params, 10.0, 5000, seed=3, batch_size=1000, workers=3)
        assert single == multi

    def test_too_few_samples(self, table2_params: ModelParams) -> None:
        with pytest.raises(DomainError, match="n"):
            mc_unconditional_survival(table2_params, 10.0, 10, seed=0)

    def test_standard_error_shrinks_with_sample_size(self, table2_params: ModelParams) -> None:
        """样本数放大 4 倍，标准误约减半"""
        small = mc_unconditional_survival(table2_params, 10.0, 4000, seed=18)
        large = mc_unconditional_survival(table2_params, 10.0, 16_000, seed=18)
        assert small.std_error / large.std_error == pytest.approx(2.0, rel=0.05)


class TestPriceOracle:
    """0 时刻贴现支付。"""

    @pytest.mark.parametrize("delta", [0.0, 0.5])
    def test_zcb(self, table2_params: ModelParams, delta: float) -> None:
        contract = ContractSpec.zcb(10.0, RATE, delta)
        report = mc_price_check(table2_params, contract, 40_000, seed=18)
        closed = price_dzcb_partial(table2_params, RATE, delta, InfoState.partial(0.0, 10.0, 0.0))
        assert report.agrees_with(closed, N_SE)

    def test_coupon_bond(self, table2_params: ModelParams) -> None:
        bond = ContractSpec.coupon_bond(10.0, RATE, 0.03, delta=0.4)
        report = mc_price_check(table2_params, bond, 40_000, seed=7)
        assert report.agrees_with(price_general(table2_params, bond, InfoState.partial(0.0, 10.0, 0.0)), N_SE)

    def test_time_varying_contract(self, table2_params: ModelParams) -> None:
        """非常数合约走积分表；离散误差远小于统计误差"""
        contract = ContractSpec(
            maturity_T=5.0,
            face_L=1.0,
            premium_rate=lambda s: 0.02 + 0.002 * s,
            recovery=lambda s: 0.3,
            discount_rate=lambda s: 0.02 + 0.001 * s,
            kind="coupon-bond",
        )
        report = mc_price_check(table2_params, contract, 20_000, seed=2, dt=1e-3)
        closed = price_general(table2_params, contract, InfoState.partial(0.0, 5.0, 0.0), tol=1e-8)
        assert report.agrees_with(closed, N_SE, budget=1e-5)

    def test_fair_spread(self, table2_params: ModelParams) -> None:
        cds = ContractSpec.cds(10.0, RATE, 0.0, protection=0.6)
        report = mc_fair_spread(table2_params, cds, 40_000, seed=18)
        assert report.std_error > 0.0
        assert report.agrees_with(fair_spread(table2_params, cds, InfoState.partial(0.0, 10.0, 0.0)), N_SE)


class TestObservationFilterMean:
    """F^Y 滤波的无偏性。"""

    def test_mean_matches_prior(self, table2_params: ModelParams) -> None:
        reports = filter_unbiasedness(table2_params, (1.0, 3.0), 2000, dt=2e-2, seed=18, f_filter=True)
        assert [r.label for r in reports] == ["mean_pi_f(t=1)", "mean_pi_f(t=3)"]
        for report, t in zip(reports, (1.0, 3.0)):
            assert report.std_error > 0.0
            assert report.agrees_with(prior_change_probability(table2_params, t), N_SE, budget=5e-3)

    def test_mean_with_atom(self, table2_params: ModelParams) -> None:
        params = table2_params.replace(pi0=0.3)
        (report,) = filter_unbiasedness(params, (2.0,), 2000, dt=2e-2, seed=5, f_filter=True)
        assert report.agrees_with(prior_change_probability(params, 2.0), N_SE, budget=5e-3)


@pytest.mark.slow
class TestFilterOracles:
    """依赖路径模拟的检查。"""

    def test_tower_property(self, table2_params: ModelParams) -> None:
        report = mc_tower_check(table2_params, 5.0, 10.0, 4000, dt=1e-2, seed=18)
        assert report.agrees_with(_closed_survival(table2_params), N_SE, budget=5e-3)

    def test_tower_time_must_be_inside(self, table2_params: ModelParams) -> None:
        with pytest.raises(DomainError, match="t"):
            mc_tower_check(table2_params, 10.0, 10.0, 1000, dt=1e-2, seed=0)

    def test_tower_times_sorted(self, table2_params: ModelParams) -> None:
        reports = mc_tower_checks(table2_params, (5.0, 2.5), 10.0, 1000, dt=5e-2, seed=3)
        assert [r.label for r in reports] == ["tower(t=2.5,T=10)", "tower(t=5,T=10)"]
        assert all(r.n_samples == 1000 for r in reports)

    def test_bias_slopes(self, table2_params: ModelParams) -> None:
        slopes = calibrate_bias_slopes(table2_params, (2.5, 5.0), 10.0, 1000, seed=3, dts=(4e-2, 2e-2))
        assert len(slopes) == 2
        assert all(s >= 0.0 and math.isfinite(s) for s in slopes)
        with pytest.raises(DomainError, match="dts"):
            calibrate_bias_slopes(table2_params, (2.5,), 10.0, 1000, seed=3, dts=(1e-2,))

    def test_unbiasedness(self, table2_params: ModelParams) -> None:
        reports = filter_unbiasedness(table2_params, (1.0, 4.0), 4000, dt=1e-2, seed=18)
        assert [r.label for r in reports] == ["mean_pi(t=1)", "mean_pi(t=4)"]
        for report, t in zip(reports, (1.0, 4.0)):
            assert report.agrees_with(prior_change_probability(table2_params, t), N_SE, budget=5e-3)

    def test_prior_change_probability(self, table2_params: ModelParams) -> None:
        assert prior_change_probability(table2_params, 0.0) == 0.0
        params = table2_params.replace(pi0=0.2)
        assert prior_change_probability(params, 2.0) == pytest.approx(0.2 + 0.8 * (1.0 - math.exp(-0.5)))

    def test_mse_rows(self, table1_params: ModelParams) -> None:
        rows = mc_mse_compare(table1_params, (10.0, 20.0), 400, dt=5e-2, seed=18)
        assert [row.time for row in rows] == [10.0, 20.0]
        for row in rows:
            assert row.n_samples == 400
            assert row.mse_g >= 0.0 and row.mse_f >= 0.0
            assert row.se_diff >= 0.0

    def test_mse_needs_pairs(self, table1_params: ModelParams) -> None:
        with pytest.raises(DomainError, match="n"):
            mc_mse_compare(table1_params, (10.0,), 1, dt=5e-2, seed=0)

    def test_jump_identity(self, table2_params: ModelParams) -> None:
        worst, checked = jump_identity_max_error(table2_params, 20, dt=1e-2, seed=18, horizon=10.0)
        assert checked > 0
        assert worst <= 1e-14

    def test_scheme_gap_milstein_ratio_in_band(self, table2_params: ModelParams) -> None:
        """Milstein 直接格式：步长减半时与几率比格式的差约减半"""
        gap = scheme_gap(table2_params, 10, dt=1e-3, seed=18, horizon=1.0, milstein=True)
        assert 0.0 < gap.gap_half < gap.gap_dt < 1e-2
        low, high = SCHEME_RATIO_BAND
        assert low <= gap.mean_ratio <= high

    def test_scheme_gap_euler_converges_slower(self, table2_params: ModelParams) -> None:
        """Euler 直接格式只有 1/2 阶，收缩比低于 Milstein"""
        euler = scheme_gap(table2_params, 10, dt=1e-3, seed=18, horizon=1.0, milstein=False)
        milstein = scheme_gap(table2_params, 10, dt=1e-3, seed=18, horizon=1.0, milstein=True)
        assert euler.mean_ratio < milstein.mean_ratio
        assert euler.gap_dt > milstein.gap_dt


@pytest.mark.slow
class TestSensitivity:
    """阈值比例敏感性。"""

    def test_fixed_latent(self, table1_params: ModelParams) -> None:
        variants = [table1_params.replace(mu2=0.12), table1_params.replace(mu2=0.12, beta=2.0)]
        results = sensitivity_study(
            variants, 200, dt=5e-2, seed=18, horizon=60.0, fixed_latent=(17.51, 0.704), labels=("a", "b")
        )
        assert [r.label for r in results] == ["a", "b"]
        for result in results:
            assert result.n_paths == 200
            assert result.skipped is None
            assert result.times == [0.5, 2.0]
            assert all(0.0 <= v <= 1.0 for v in result.fractions_below + result.fractions_above)

    def test_paths_outside_window_skipped(self, table1_params: ModelParams) -> None:
        (result,) = sensitivity_study([table1_params], 300, dt=1e-1, seed=3, horizon=20.0)
        assert result.skipped is not None
        assert result.skipped.reason == "xi_outside_window"
        assert result.n_paths + result.skipped.count == 300

    def test_label_count_checked(self, table1_params: ModelParams) -> None:
        with pytest.raises(DomainError, match="labels"):
            sensitivity_study([table1_params], 10, dt=1e-1, seed=0, horizon=10.0, labels=("a", "b"))

    def test_traces(self, table1_params: ModelParams) -> None:
        times, traces, xi = sensitivity_traces(table1_params, 3, 1e-1, 18, 10.0, fixed_latent=(2.0, 0.5), stride=5)
        assert traces.shape == (len(times), 3)
        np.testing.assert_array_equal(xi, [2.0, 2.0, 2.0])
        assert np.all((traces >= 0.0) & (traces <= 1.0))
