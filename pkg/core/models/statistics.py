"""Measured-quantity models: corners, martingale, residual moments, reports."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class CornerLabel:
    """A corner m of the unit cube, as a tuple of bits."""

    m: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.m)
        if not bits or any(b not in (0, 1) for b in bits):
            raise ValueError("CornerLabel bits must be 0 or 1")
        object.__setattr__(self, "m", bits)

    @property
    def is_consensus(self) -> bool:
        """True for the all-zeros or all-ones corner."""
        return len(set(self.m)) == 1

    @property
    def value(self) -> Optional[int]:
        """0 or 1 for a consensus corner, None for a mixed one."""
        return self.m[0] if self.is_consensus else None


@dataclass(frozen=True, eq=False)
class MartingaleSeries:
    """q_t = pi^T x_t along one trajectory and its differences.

    `dq[k]` = q_{k+2} - q_{k+1} (time-aligned with the trajectory's
    transitions). When actions were recorded, `dq_from_actions[k]` is
    alpha * pi^T (a_t - x_t) and `identity_error` the largest gap between the
    two expressions.
    """

    q: np.ndarray
    dq: np.ndarray
    dq_from_actions: Optional[np.ndarray] = None
    identity_error: Optional[float] = None


@dataclass(frozen=True, eq=False)
class ResidualMoments:
    """Across-run moments of y_t = a_t - x_t at the requested times.

    Row k of every array refers to `times[k]`. `second_moments[k, i]` is the
    sample mean of y_{t,i}^2 (an unbiased estimate of E{y^2}); `means[k, i]`
    of y_{t,i}; `correlations[k]` is the n x n Pearson matrix, NaN where an
    agent's residual has zero sample variance. `pi_quadratic[k]` is the sample
    mean of (pi^T y_t)^2 when pi was supplied.
    """

    times: Tuple[int, ...]
    runs: int
    second_moments: np.ndarray
    means: np.ndarray
    correlations: np.ndarray
    pi_quadratic: Optional[np.ndarray] = None

    @property
    def mean_second_moment(self) -> np.ndarray:
        """Per-time average of E{y_i^2} over agents."""
        return self.second_moments.mean(axis=1)

    def max_abs_offdiagonal_correlation(self, k: int) -> float:
        """Largest |corr(y_i, y_j)|, i != j, at times[k], ignoring NaN."""
        corr = self.correlations[k]
        off = corr[~np.eye(corr.shape[0], dtype=bool)]
        off = off[~np.isnan(off)]
        return float(np.max(np.abs(off))) if off.size else 0.0


@dataclass(frozen=True)
class CornerProbabilities:
    """Counts (and fractions) of runs whose state at time t lies in a corner.

    Counts are kept alongside fractions so confidence intervals can be
    recomputed downstream. n_any = n_zero + n_one + n_mixed always.
    """

    t: int
    delta: float
    runs: int
    n_any: int
    n_zero: int
    n_one: int
    n_mixed: int

    @property
    def p_corner_any(self) -> float:
        return self.n_any / self.runs

    @property
    def p_zero(self) -> float:
        return self.n_zero / self.runs

    @property
    def p_one(self) -> float:
        return self.n_one / self.runs

    @property
    def p_mixed(self) -> float:
        return self.n_mixed / self.runs

    def as_tuple(self) -> Tuple[float, float, float, float]:
        """(p_corner_any, p_zero, p_one, p_mixed)."""
        return (self.p_corner_any, self.p_zero, self.p_one, self.p_mixed)


@dataclass(frozen=True)
class ConsensusFractionReport:
    """Empirical consensus-to-1 fraction against the martingale prediction.

    `predicted` is q_1 = pi^T x_1. The interval is the exact (Clopper-Pearson)
    binomial interval at `confidence`; `agrees` is False when the prediction
    falls outside it.
    """

    runs: int
    consensus_one: int
    consensus_zero: int
    non_consensus: int
    fraction: float
    predicted: float
    ci_low: float
    ci_high: float
    confidence: float

    @property
    def agrees(self) -> bool:
        return self.ci_low <= self.predicted <= self.ci_high


@dataclass(frozen=True)
class OneStepMartingaleCheck:
    """Sample mean of Delta q over resampled actions from a fixed x_t.

    `predicted_variance` is alpha^2 * sum_i pi_i^2 x_i (1 - x_i); `z` is the
    sample mean divided by its predicted standard error.
    """

    samples: int
    mean: float
    predicted_variance: float
    z: float


@dataclass(frozen=True, eq=False)
class MomentDecay:
    """Per-time moments used for the r-th moment convergence check.

    `lr_moments[k]` is the across-run mean of |x_t - x_inf|^r averaged over
    agents, with x_inf the run's final consensus corner (undecided and
    non-consensus runs are excluded). `product_moments[k]` is the mean of
    (x_t (1 - x_t))^2.
    """

    times: Tuple[int, ...]
    r: float
    runs_used: int
    lr_moments: np.ndarray
    product_moments: np.ndarray


@dataclass(frozen=True, eq=False)
class TimeVariantResult:
    """Two-agent time-variant averaging x_{t+1} = W_t x_t.

    `trajectory[k]` is the state after k steps (row 0 is x0). `product` is the
    accumulated W_{T-1} ... W_0 and `limit_matrix` its T -> infinity limit.
    """

    trajectory: np.ndarray
    product: np.ndarray
    limit_matrix: np.ndarray
    betas: np.ndarray

    @property
    def terminal_gap(self) -> float:
        x = self.trajectory[-1]
        return float(abs(x[0] - x[1]))
