"""cphazard/core/quadrature.py 的单元测试。"""

import math

import pytest

from cphazard.core.exceptions import QuadratureError
from cphazard.core.quadrature import adaptive_simpson


class TestAdaptiveSimpson:
    """自适应 Simpson 积分。"""

    def test_polynomial(self) -> None:
        assert adaptive_simpson(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_exponential(self) -> None:
        value = adaptive_simpson(lambda x: math.exp(-x), 0.0, 10.0, tol=1e-12)
        assert value == pytest.approx(-math.expm1(-10.0), abs=1e-11)

    def test_empty_interval(self) -> None:
        assert adaptive_simpson(math.sin, 2.0, 2.0) == 0.0

    def test_reversed_bounds(self) -> None:
        forward = adaptive_simpson(math.cos, 0.0, 1.0)
        assert adaptive_simpson(math.cos, 1.0, 0.0) == pytest.approx(-forward)

    def test_non_finite_integrand(self) -> None:
        with pytest.raises(QuadratureError, match="非有限值"):
            adaptive_simpson(lambda x: math.nan, 0.0, 1.0)

    def test_depth_exhausted(self) -> None:
        with pytest.raises(QuadratureError, match="未收敛"):
            adaptive_simpson(math.sqrt, 0.0, 1.0, tol=1e-15, max_depth=5)
