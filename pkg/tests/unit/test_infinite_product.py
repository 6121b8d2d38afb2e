"""Unit tests for the corner-persistence product g."""

import math

import numpy as np
import pytest

from core.exceptions import InvalidArgumentError
from core.utils.infinite_product import (
    g_function,
    g_function_grid,
    log_g_function,
    truncated_product,
    truncation_index,
)


class TestGFunction:
    def test_known_value(self):
        # prod_{k >= 1} (1 - 2^-k)
        assert g_function(0.5, 1, 0.5) == pytest.approx(0.2887880950866024, rel=1e-13)

    def test_exact_endpoints(self):
        assert g_function(0.3, 4, 0.0) == 1.0
        assert g_function(0.3, 4, 1.0) == 0.0
        assert log_g_function(0.3, 4, 0.0) == 0.0
        assert log_g_function(0.3, 4, 1.0) == -math.inf

    def test_power_in_n(self):
        assert g_function(0.4, 3, 0.6) == pytest.approx(g_function(0.4, 1, 0.6) ** 3, rel=1e-12)

    def test_log_stays_finite_when_g_underflows(self):
        assert g_function(0.001, 6, 0.5) == 0.0
        log_g = log_g_function(0.001, 6, 0.5)
        assert math.isfinite(log_g)
        assert log_g < -1000

    def test_decreasing_in_gamma(self):
        values = [g_function(0.2, 2, gamma) for gamma in np.linspace(0.0, 1.0, 21)]
        assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.7, 0.95])
    def test_matches_long_direct_product(self, alpha):
        assert g_function(alpha, 2, 0.7) == pytest.approx(truncated_product(alpha, 2, 0.7, 2000), rel=1e-10)

    def test_truncation_index_covers_tail(self):
        S = truncation_index(0.3, 2, 0.9, 1e-15)
        assert 2 * 2 * 0.9 * (1 - 0.3) ** (S + 1) / 0.3 <= 1e-15
        assert (1 - 0.3) ** S * 0.9 <= 0.5

    @pytest.mark.parametrize(
        "alpha,N,gamma,tol",
        [
            (0.0, 1, 0.5, 1e-15),
            (1.0, 1, 0.5, 1e-15),
            (0.5, 0, 0.5, 1e-15),
            (0.5, 1.5, 0.5, 1e-15),
            (0.5, 1, -0.1, 1e-15),
            (0.5, 1, 1.1, 1e-15),
            (0.5, 1, 0.5, 0.0),
        ],
    )
    def test_invalid_arguments(self, alpha, N, gamma, tol):
        with pytest.raises(InvalidArgumentError):
            g_function(alpha, N, gamma, tol)


class TestGrid:
    def test_layout(self):
        frame = g_function_grid([0.25, 0.5], 1, [0.0, 0.5, 1.0])
        assert list(frame.columns) == ["gamma", "alpha=0.25", "alpha=0.5"]
        assert frame["gamma"].tolist() == [0.0, 0.5, 1.0]
        assert frame["alpha=0.5"].iloc[0] == 1.0
        assert frame["alpha=0.5"].iloc[2] == 0.0
        assert frame["alpha=0.5"].iloc[1] == pytest.approx(0.2887880950866024, rel=1e-13)
