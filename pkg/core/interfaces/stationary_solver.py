"""Abstract interface for stationary (Perron) vector solvers."""

from abc import ABC, abstractmethod

from core.models.perron_vector import PerronVector
from core.models.weight_matrix import WeightMatrix


class IStationarySolver(ABC):
    """Protocol for computing the normalised left Perron vector of W.

    Callers have already checked that W is irreducible; implementations only
    have to meet the residual contract ||pi^T W - pi^T||_inf <= tol.
    """

    @abstractmethod
    def solve(self, W: WeightMatrix, tol: float, max_iters: int) -> PerronVector:
        """Return pi with pi > 0, sum(pi) = 1 and residual <= tol.

        Raises:
            NoConvergenceError: The contract could not be met.
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """Return the registry key of this solver."""
        pass
