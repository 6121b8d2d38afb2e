"""Unit tests for the martingale diagnostics."""

import math

import numpy as np
import pytest

from core.exceptions import DimensionMismatchError, InvalidArgumentError, MissingActionsError
from core.models.perron_vector import PerronVector
from core.models.simulation import SimulationConfig
from core.services.dynamics_service import simulate
from core.services.ensemble_service import monte_carlo
from core.services.martingale_service import (
    martingale_series,
    moment_decay,
    one_step_martingale_check,
    residual_moments,
)
from core.services.spectral_service import perron_left_vector
from core.utils.random_networks import random_irreducible_matrix
from tests.unit.ensemble_builders import consensus_verdict, make_ensemble, undecided_verdict


class TestMartingaleSeries:
    def test_identity_with_actions(self, triangle):
        config = SimulationConfig(W=triangle, alpha=0.3, x1=[0.2, 0.5, 0.8], t_max=200, seed=5, record_actions=True)
        series = martingale_series(simulate(config), perron_left_vector(triangle))
        assert series.q.shape == (200,)
        assert series.dq.shape == (199,)
        assert series.q[0] == pytest.approx(0.5)
        assert series.identity_error <= 1e-13
        assert np.all((series.q >= 0.0) & (series.q <= 1.0))

    @pytest.mark.parametrize("seed", range(5))
    def test_identity_with_non_uniform_pi(self, seed):
        rng = np.random.default_rng(40 + seed)
        W = random_irreducible_matrix(rng, 4)
        pi = perron_left_vector(W)
        assert np.ptp(pi.values) > 1e-3
        config = SimulationConfig(
            W=W, alpha=0.3, x1=rng.uniform(0.05, 0.95, size=4), t_max=200, seed=seed, record_actions=True
        )
        series = martingale_series(simulate(config), pi)
        assert series.identity_error <= 1e-14

    def test_without_actions(self, triangle_config, triangle):
        series = martingale_series(simulate(triangle_config), perron_left_vector(triangle))
        assert series.dq_from_actions is None
        assert series.identity_error is None

    def test_dimension_mismatch(self, triangle_config):
        with pytest.raises(DimensionMismatchError):
            martingale_series(simulate(triangle_config), PerronVector(values=[0.5, 0.5], residual=0.0))


class TestResidualMoments:
    def test_half_opinions_give_quarter(self, pair):
        config = SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=20, record_actions=True)
        ensemble = monte_carlo(config, 50, window=5, sample_times=(1,))
        moments = residual_moments(ensemble, [1], perron_left_vector(pair))
        assert moments.times == (1,)
        assert moments.runs == 50
        assert moments.second_moments[0].tolist() == [0.25, 0.25]
        assert moments.mean_second_moment.tolist() == [0.25]
        assert np.all(np.abs(moments.means[0]) <= 0.5)
        assert moments.pi_quadratic is not None

    def test_constant_residual_has_nan_correlation(self, triangle):
        config = SimulationConfig(W=triangle, alpha=0.3, x1=[0.0, 0.5, 0.5], t_max=20, record_actions=True)
        ensemble = monte_carlo(config, 40, window=5, sample_times=(1,))
        moments = residual_moments(ensemble, [1])
        assert np.isnan(moments.correlations[0][0, 1])
        assert moments.second_moments[0][0] == 0.0
        assert math.isfinite(moments.max_abs_offdiagonal_correlation(0))
        assert moments.pi_quadratic is None

    def test_needs_actions(self, triangle_config):
        ensemble = monte_carlo(triangle_config, 3, window=10, sample_times=(5,))
        with pytest.raises(MissingActionsError):
            residual_moments(ensemble, [5])


class TestOneStepCheck:
    def test_mean_increment_is_zero(self, triangle):
        check = one_step_martingale_check(
            np.array([0.2, 0.5, 0.8]), triangle, perron_left_vector(triangle), 0.3, samples=100_000, seed=1
        )
        assert check.predicted_variance == pytest.approx(0.09 * (0.16 + 0.25 + 0.16) / 9)
        assert abs(check.z) < 5.0

    def test_needs_two_samples(self, triangle):
        with pytest.raises(InvalidArgumentError):
            one_step_martingale_check(np.array([0.2, 0.5, 0.8]), triangle, perron_left_vector(triangle), 0.3, 1)

    def test_dimension_mismatch(self, triangle):
        with pytest.raises(DimensionMismatchError):
            one_step_martingale_check(np.array([0.2, 0.5]), triangle, perron_left_vector(triangle), 0.3, 10)


class TestMomentDecay:
    def test_moments_against_limits(self):
        ensemble = make_ensemble(
            [[0.01, 0.02], [0.99, 0.98], [0.5, 0.5]],
            verdicts=[consensus_verdict(0), consensus_verdict(1), undecided_verdict()],
        )
        decay = moment_decay(ensemble, [10])
        assert decay.runs_used == 2
        assert decay.lr_moments[0] == pytest.approx((0.0001 + 0.0004) / 2)
        expected = np.mean(np.array([0.01 * 0.99, 0.02 * 0.98, 0.99 * 0.01, 0.98 * 0.02]) ** 2)
        assert decay.product_moments[0] == pytest.approx(expected)

    def test_needs_a_consensus_run(self):
        with pytest.raises(InvalidArgumentError, match="consensus"):
            moment_decay(make_ensemble([[0.5, 0.5]]), [10])

    def test_positive_order(self):
        ensemble = make_ensemble([[0.01, 0.02]], verdicts=[consensus_verdict(0)])
        with pytest.raises(InvalidArgumentError):
            moment_decay(ensemble, [10], r=0.0)
