"""cphazard/manager/batch.py 的单元测试。"""

import numpy as np
import pytest

from cphazard.core.filters import step_filter_g
from cphazard.manager.batch import BatchSimulator, draw_latent
from cphazard.models.params import ModelParams


def _rngs(seed: int) -> list:
    return [np.random.default_rng(seed + k) for k in range(3)]


class TestDrawLatent:
    """批量抽取潜变量。"""

    def test_atom_probability(self, table2_params: ModelParams) -> None:
        xi, theta = draw_latent(table2_params.replace(pi0=0.4), np.random.default_rng(0), 20000)
        assert np.mean(xi == 0.0) == pytest.approx(0.4, abs=0.015)
        assert np.all(theta > 0.0)


class TestBatchSimulator:
    """向量化滤波引擎。"""

    def test_shapes_and_range(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 5.0, 1e-2, with_f=True)
        out = simulator.run(200, _rngs(1), record_times=(1.0, 2.5, 5.0))
        assert out.pi_g.shape == (3, 200)
        assert out.pi_f is not None and out.pi_f.shape == (3, 200)
        assert np.all((out.pi_g >= 0.0) & (out.pi_g <= 1.0))
        np.testing.assert_allclose(out.record_times, [1.0, 2.5, 5.0])

    def test_default_indicator(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 5.0, 1e-2)
        out = simulator.run(300, _rngs(2), record_times=(2.0, 5.0))
        for row, t in enumerate(out.record_times):
            np.testing.assert_array_equal(out.h[row], (out.tau <= t + 1e-12).astype(float))

    def test_reproducible(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 2.0, 1e-2)
        a = simulator.run(50, _rngs(3), record_times=(2.0,))
        b = simulator.run(50, _rngs(3), record_times=(2.0,))
        np.testing.assert_array_equal(a.pi_g, b.pi_g)

    def test_matches_scalar_filter_without_events(self, table2_params: ModelParams) -> None:
        """区间内无事件时与逐步标量滤波一致"""
        dt, horizon, size = 1e-2, 1.0, 4
        simulator = BatchSimulator(table2_params, horizon, dt)
        out = simulator.run(size, _rngs(4), record_times=(horizon,), latent=(50.0, 100.0))

        main = np.random.default_rng(5)
        pi = np.zeros(size)
        for k in range(len(simulator.grid) - 1):
            h = float(simulator.grid[k + 1] - simulator.grid[k])
            d_y = table2_params.beta * main.standard_normal(size) * np.sqrt(h)
            pi = np.array([step_filter_g(table2_params, p, d, h, default_in_step=False) for p, d in zip(pi, d_y)])
        np.testing.assert_allclose(out.pi_g[0], pi, atol=1e-12)

    def test_jump_recorded_after_default(self, table2_params: ModelParams) -> None:
        """所有路径在 τ 处违约后 H = 1"""
        simulator = BatchSimulator(table2_params, 2.0, 1e-2)
        tau = 0.05 / table2_params.mu1
        assert tau < 2.0
        out = simulator.run(100, _rngs(6), record_times=(2.0,), latent=(10.0, 0.05))
        np.testing.assert_allclose(out.tau, tau)
        assert np.all(out.h[0] == 1.0)

    def test_jump_near_upper_clamp_stays_below_one(self, steep_params: ModelParams) -> None:
        """变点后 Π^G 贴近上界再违约，跳跃后仍小于 1"""
        simulator = BatchSimulator(steep_params, 5.0, 1e-2, with_f=True)
        out = simulator.run(200, _rngs(10), record_times=(2.5, 5.0), latent=(1.0, 3.0))
        assert np.all(out.h[-1] == 1.0)
        assert np.all(out.pi_g < 1.0)
        assert out.pi_f is not None and np.all(out.pi_f < 1.0)

    def test_xi_multiples(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 3.0, 1e-2, full_bridge=True)
        out = simulator.run(20, _rngs(7), xi_multiples=(0.5, 2.0), latent=(1.0, 5.0))
        assert out.path_pi_g.shape == (2, 20)
        assert not np.isnan(out.path_pi_g).any()

    def test_common_random_numbers(self, table2_params: ModelParams) -> None:
        """同一随机流下仅 β 不同的两个变体；β 极大时观测几乎无信息，Π 退化为确定性演化"""
        base = BatchSimulator(table2_params, 2.0, 1e-2, full_bridge=True)
        noisy = BatchSimulator(table2_params.replace(beta=1e3), 2.0, 1e-2, full_bridge=True)
        a = base.run(10, _rngs(8), record_times=(2.0,), latent=(0.7, 5.0))
        b = noisy.run(10, _rngs(8), record_times=(2.0,), latent=(0.7, 5.0))
        pi = 0.0
        for _ in range(200):
            pi = step_filter_g(noisy.params, pi, 0.0, 1e-2, default_in_step=False)
        np.testing.assert_allclose(b.pi_g[0], pi, atol=1e-3)
        assert not np.allclose(a.pi_g[0], b.pi_g[0])

    def test_traces(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 1.0, 1e-2)
        out = simulator.run(10, _rngs(9), trace_paths=3, trace_stride=10)
        assert out.traces.shape == (len(out.trace_times), 3)
        assert out.trace_times[0] == 0.0 and out.trace_times[-1] == 1.0

    def test_record_beyond_horizon(self, table2_params: ModelParams) -> None:
        simulator = BatchSimulator(table2_params, 1.0, 1e-2)
        with pytest.raises(ValueError, match="超出模拟区间"):
            simulator.run(5, _rngs(0), record_times=(2.0,))
