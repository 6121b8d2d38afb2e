"""Direct linear solve for the left Perron vector."""

import logging
import math

import numpy as np

from core.exceptions import NoConvergenceError
from core.implementations.solvers.damped_power_iteration import bordered_system, left_residual
from core.interfaces.stationary_solver import IStationarySolver
from core.models.perron_vector import PerronVector
from core.models.weight_matrix import WeightMatrix

logger = logging.getLogger(__name__)


class LinearSolve(IStationarySolver):
    """Solves (W^T - I) pi = 0 with one equation replaced by sum(pi) = 1.

    For an irreducible W the kernel of W^T - I is one-dimensional, so the
    bordered system is nonsingular. `max_iters` is unused.
    """

    def get_name(self) -> str:
        return "linear"

    def solve(self, W: WeightMatrix, tol: float, max_iters: int) -> PerronVector:
        n = W.n
        system = bordered_system(W)
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        try:
            pi = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError:
            raise NoConvergenceError(0, float("inf")) from None
        pi = pi / math.fsum(pi)
        residual = left_residual(W, pi)
        if residual > tol or not np.all(pi > 0.0):
            raise NoConvergenceError(0, residual)
        logger.debug(f"Linear solve: n={n}, residual={residual:.3e}")
        return PerronVector(values=pi, residual=residual, iterations=0, solver=self.get_name())
