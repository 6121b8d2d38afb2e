"""Weight (trust) matrix model"""

import math
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from core.exceptions import NegativeEntryError, NonSquareMatrixError, RowSumViolationError

# Absolute tolerance on each row sum. Inputs are never renormalised: a matrix
# that misses by more than this is a configuration error, not rounding.
ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """A validated n x n row-stochastic trust matrix.

    Entry (i, j) is w_ij, the trust agent i places in agent j. An edge runs
    from j to i exactly when w_ij > 0 (j influences i); there is no epsilon
    threshold. The array is stored as a read-only float64 copy and is shared
    across worker threads as is.
    """

    entries: np.ndarray

    def __post_init__(self):
        try:
            arr = np.array(self.entries, dtype=np.float64, copy=True)
        except (TypeError, ValueError):
            raise NonSquareMatrixError("weight matrix rows must all be numeric and of equal length") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise NonSquareMatrixError(f"weight matrix must be n x n with n >= 1, got shape {arr.shape}")
        for (i, j), value in np.ndenumerate(arr):
            if not math.isfinite(value) or value < 0.0:
                raise NegativeEntryError(i, j, float(value))
        for i, row in enumerate(arr):
            total = math.fsum(row)
            if abs(total - 1.0) > ROW_SUM_TOL:
                raise RowSumViolationError(i, total)
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        """Agent count."""
        return self.entries.shape[0]

    def has_edge(self, source: int, target: int) -> bool:
        """True when `source` influences `target` (w_target,source > 0)."""
        return bool(self.entries[target, source] > 0.0)

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield (source, target) pairs for every strictly positive weight."""
        targets, sources = np.nonzero(self.entries > 0.0)
        for target, source in zip(targets.tolist(), sources.tolist()):
            yield source, target

    def successors(self, agent: int) -> Tuple[int, ...]:
        """Agents that `agent` influences, ascending."""
        return tuple(np.nonzero(self.entries[:, agent] > 0.0)[0].tolist())

    def is_unit_self_loop(self, agent: int) -> bool:
        """True when the agent listens only to itself (structural stubbornness)."""
        row = self.entries[agent]
        return bool(row[agent] == 1.0 and np.count_nonzero(row) == 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes()))
