"""The corner-persistence infinite product

    g(alpha, N, gamma) = prod_{s >= 0} (1 - (1 - alpha)^s gamma)^N

evaluated in log space. g is the probability-style factor that governs how
likely a run that sits in a corner contracting by (1 - alpha) per step is to
stay there forever. It is continuous and decreasing in gamma with g(., ., 0) = 1
and g(., ., 1) = 0.
"""

import logging
import math
from typing import Sequence

import numpy as np
import pandas as pd

from core.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-15


def _validate(alpha: float, N: int, gamma: float, tol: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if not 0.0 <= gamma <= 1.0:
        raise InvalidArgumentError(f"gamma must lie in [0, 1], got {gamma!r}")
    if not tol > 0.0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")


def truncation_index(alpha: float, N: int, gamma: float, tol: float) -> int:
    """Last factor index S such that the dropped log-tail is below tol.

    The tail sum_{s>S} -N log(1 - (1-alpha)^s gamma) is at most
    2 N gamma (1-alpha)^{S+1} / alpha once (1-alpha)^s gamma <= 1/2, so S is
    the larger of the geometric-tail index (with tol halved) and the index
    where the factors reach 1/2.
    """
    ratio = math.log1p(-alpha)
    tail = math.ceil(math.log(tol * alpha / (2.0 * N * gamma)) / ratio)
    half = math.ceil(math.log(0.5 / gamma) / ratio) if gamma > 0.5 else 0
    return max(tail, half, 0)


def log_g_function(alpha: float, N: int, gamma: float, tol: float = DEFAULT_TOL) -> float:
    """log g(alpha, N, gamma); 0 at gamma = 0 and -inf at gamma = 1.

    Finite for every gamma < 1 even where g itself underflows to 0.0.
    """
    _validate(alpha, N, gamma, tol)
    if gamma == 0.0:
        return 0.0
    if gamma == 1.0:
        return -math.inf
    S = truncation_index(alpha, N, gamma, tol)
    powers = np.power(1.0 - alpha, np.arange(S + 1, dtype=np.float64))
    return N * math.fsum(np.log1p(-powers * gamma))


def g_function(alpha: float, N: int, gamma: float, tol: float = DEFAULT_TOL) -> float:
    """g(alpha, N, gamma) with truncation error below tol.

    Exactly 1.0 at gamma = 0 and exactly 0.0 at gamma = 1.

    Raises:
        InvalidArgumentError: alpha outside (0, 1), N not a positive integer,
            gamma outside [0, 1] or tol not positive.
    """
    log_g = log_g_function(alpha, N, gamma, tol)
    if log_g == -math.inf:
        return 0.0
    return math.exp(log_g)


def truncated_product(alpha: float, N: int, gamma: float, S: int) -> float:
    """prod_{s=0}^{S} (1 - (1-alpha)^s gamma)^N by direct multiplication."""
    value = 1.0
    for s in range(S + 1):
        value *= (1.0 - (1.0 - alpha) ** s * gamma) ** N
    return value


def g_function_grid(
    alphas: Sequence[float],
    N: int,
    gammas: Sequence[float],
    tol: float = DEFAULT_TOL,
) -> pd.DataFrame:
    """g on a gamma x alpha grid.

    Returns a frame with a `gamma` column followed by one `alpha=<value>`
    column per alpha, one row per gamma.
    """
    frame = pd.DataFrame({"gamma": np.asarray(gammas, dtype=np.float64)})
    for alpha in alphas:
        frame[f"alpha={alpha:.6g}"] = [g_function(float(alpha), N, float(gamma), tol) for gamma in frame["gamma"]]
    logger.info(f"g grid: {len(frame)} gamma values x {len(alphas)} alpha values, N={N}")
    return frame
