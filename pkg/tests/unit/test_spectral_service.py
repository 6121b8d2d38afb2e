"""Unit tests for the Perron vector and its solvers."""

import numpy as np
import pytest

from config.settings import SpectralConfig
from core.exceptions import NoConvergenceError, ReducibleMatrixError
from core.implementations.solvers.damped_power_iteration import DampedPowerIteration, left_residual
from core.implementations.solvers.linear_solve import LinearSolve
from core.models.weight_matrix import WeightMatrix
from core.services.spectral_service import perron_left_vector
from core.utils.random_networks import random_irreducible_matrix

TWO_STATE = [[0.9, 0.1], [0.5, 0.5]]

class TestPerronLeftVector:
    def test_two_state_chain(self):
        pi = perron_left_vector(WeightMatrix(TWO_STATE))
        assert pi.values == pytest.approx([5 / 6, 1 / 6], abs=1e-10)
        assert pi.residual <= 1e-12
        assert pi.solver == "power"

    def test_doubly_stochastic_is_uniform(self, triangle):
        pi = perron_left_vector(triangle)
        assert pi.values == pytest.approx([1 / 3] * 3, abs=1e-12)

    def test_swap_matrix_converges(self):
        # Periodic chain; undamped power iteration would oscillate.
        pi = perron_left_vector(WeightMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert pi.values == pytest.approx([0.5, 0.5])

    def test_reducible_rejected(self, four_component):
        with pytest.raises(ReducibleMatrixError, match="4 components"):
            perron_left_vector(four_component)

    def test_bad_tolerance(self, pair):
        with pytest.raises(ValueError):
            perron_left_vector(pair, tol=0.0)

    def test_iteration_cap(self):
        with pytest.raises(NoConvergenceError) as exc:
            perron_left_vector(WeightMatrix(TWO_STATE), max_iters=1)
        assert exc.value.max_iters == 1

    def test_explicit_solver(self):
        pi = perron_left_vector(WeightMatrix(TWO_STATE), solver=LinearSolve())
        assert pi.solver == "linear"
        assert pi.iterations == 0
        assert pi.values == pytest.approx([5 / 6, 1 / 6], abs=1e-10)

class TestSolvers:
    """Both backends meet the same residual contract on random networks."""

    @pytest.mark.parametrize("seed", range(20))
    def test_solvers_agree(self, seed):
        rng = np.random.default_rng(seed)
        W = random_irreducible_matrix(rng, int(rng.integers(2, 13)))
        power = DampedPowerIteration(SpectralConfig()).solve(W, 1e-12, 100_000)
        linear = LinearSolve().solve(W, 1e-10, 1)
        assert left_residual(W, power.values) <= 1e-10
        assert linear.residual <= 1e-10
        assert np.allclose(power.values, linear.values, atol=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_power_iteration_reaches_round_off(self, seed):
        rng = np.random.default_rng(100 + seed)
        W = random_irreducible_matrix(rng, int(rng.integers(2, 7)))
        power = DampedPowerIteration(SpectralConfig()).solve(W, 1e-12, 100_000)
        linear = LinearSolve().solve(W, 1e-10, 1)
        assert power.residual <= 2e-15
        assert left_residual(W, power.values) <= 2e-15
        assert np.allclose(power.values, linear.values, rtol=0.0, atol=1e-13)

    def test_refinement_can_be_switched_off(self):
        W = WeightMatrix(TWO_STATE)
        config = SpectralConfig(polish_iters=0, refine_steps=0)
        rough = DampedPowerIteration(config).solve(W, 1e-6, 100_000)
        refined = DampedPowerIteration(SpectralConfig(polish_iters=0)).solve(W, 1e-6, 100_000)
        assert rough.residual > 1e-12
        assert refined.residual < rough.residual
        assert refined.residual <= 1e-15

    @pytest.mark.parametrize("seed", range(5))
    def test_permuting_agents_permutes_pi(self, seed):
        rng = np.random.default_rng(200 + seed)
        W = random_irreducible_matrix(rng, 6)
        order = rng.permutation(6)
        permuted = WeightMatrix(W.entries[np.ix_(order, order)])
        pi = perron_left_vector(W).values
        assert np.allclose(perron_left_vector(permuted).values, pi[order], rtol=0.0, atol=1e-13)

    def test_damping_must_be_open_interval(self):
        with pytest.raises(ValueError, match="damping"):
            DampedPowerIteration(SpectralConfig(damping=1.0))

    def test_names(self):
        assert DampedPowerIteration(SpectralConfig()).get_name() == "power"
        assert LinearSolve().get_name() == "linear"
