"""Perron left vector model"""

import math
from dataclasses import dataclass

import numpy as np

# Entries of an accepted vector must sum to one within this.
SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PerronVector:
    """The normalised left eigenvector pi of an irreducible stochastic W.

    pi^T W = pi^T, every entry strictly positive, entries summing to one.
    `residual` is ||pi^T W - pi^T||_inf as measured by the solver that produced
    it; `iterations` is 0 for direct solvers.
    """

    values: np.ndarray
    residual: float
    iterations: int = 0
    solver: str = ""

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(v > 0.0):
            raise ValueError("PerronVector entries must be strictly positive")
        if abs(math.fsum(v) - 1.0) > SUM_TOL:
            raise ValueError(f"PerronVector entries must sum to 1, got {math.fsum(v)!r}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]
