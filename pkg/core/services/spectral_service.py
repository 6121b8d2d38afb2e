"""Perron left vector of an irreducible stochastic matrix."""

import logging
from typing import Optional

from config.settings import SpectralConfig
from core.exceptions import ReducibleMatrixError
from core.implementations.solvers.damped_power_iteration import DampedPowerIteration
from core.interfaces.stationary_solver import IStationarySolver
from core.models.perron_vector import PerronVector
from core.models.weight_matrix import WeightMatrix
from core.services.graph_service import strongly_connected_components

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 100_000


def perron_left_vector(
    W: WeightMatrix,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    solver: Optional[IStationarySolver] = None,
) -> PerronVector:
    """Compute pi with pi^T W = pi^T, pi > 0 and sum(pi) = 1.

    Args:
        W: An irreducible trust matrix.
        tol: Bound on ||pi^T W - pi^T||_inf.
        max_iters: Iteration cap for iterative solvers.
        solver: Backend to use; damped power iteration when None.

    Raises:
        ReducibleMatrixError: W has more than one strongly connected component.
        NoConvergenceError: The solver could not meet tol within max_iters.
    """
    scc = strongly_connected_components(W)
    if scc.n_components != 1:
        raise ReducibleMatrixError(
            f"the Perron vector needs an irreducible W; this one has {scc.n_components} components"
        )
    if tol <= 0 or max_iters < 1:
        raise ValueError("tol must be positive and max_iters at least 1")
    solver = solver or DampedPowerIteration(SpectralConfig())
    pi = solver.solve(W, tol, max_iters)
    logger.info(f"Perron vector via {solver.get_name()}: residual {pi.residual:.3e} after {pi.iterations} iterations")
    return pi
