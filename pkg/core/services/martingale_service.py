"""Martingale diagnostics.

For an irreducible W with Perron vector pi, q_t = pi^T x_t is a martingale:
E{q_{t+1} | x_t} = q_t, and its increments can be written as
q_{t+1} - q_t = alpha pi^T (a_t - x_t). The residual y_t = a_t - x_t has mean
zero, uncorrelated coordinates, and E{y_{t,i}^2} = E{x_{t,i}(1 - x_{t,i})},
which decays to zero as the runs settle in a corner.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from core.exceptions import DimensionMismatchError, InvalidArgumentError
from core.models.perron_vector import PerronVector
from core.models.simulation import Ensemble, Trajectory
from core.models.statistics import MartingaleSeries, MomentDecay, OneStepMartingaleCheck, ResidualMoments
from core.models.verdict import ConsensusKind
from core.models.weight_matrix import WeightMatrix
from core.services.dynamics_service import resample_step

logger = logging.getLogger(__name__)


def martingale_series(traj: Trajectory, pi: PerronVector) -> MartingaleSeries:
    """q_t = pi^T x_t along a stored trajectory.

    When the trajectory recorded its actions, also returns
    alpha pi^T (a_t - x_t) per step and the largest deviation from the
    measured increments.

    Raises:
        DimensionMismatchError: pi and the trajectory disagree on n.
    """
    if pi.n != traj.n:
        raise DimensionMismatchError(f"pi has {pi.n} entries but the trajectory has {traj.n} agents")
    q = np.clip(traj.states @ pi.values, 0.0, 1.0)
    dq = np.diff(q)
    if traj.actions is None or traj.alpha is None:
        return MartingaleSeries(q=q, dq=dq)
    predicted = traj.alpha * ((traj.actions.astype(np.float64) - traj.states[:-1]) @ pi.values)
    error = float(np.max(np.abs(dq - predicted))) if dq.size else 0.0
    return MartingaleSeries(q=q, dq=dq, dq_from_actions=predicted, identity_error=error)


def residual_moments(
    ensemble: Ensemble, times: Sequence[int], pi: Optional[PerronVector] = None
) -> ResidualMoments:
    """Across-run moments of y_t = a_t - x_t at each requested time.

    Raises:
        MissingActionsError: the ensemble did not record actions at some t.
    """
    times = tuple(int(t) for t in times)
    n = ensemble.runs[0].final_state.shape[0]
    second = np.empty((len(times), n))
    means = np.empty((len(times), n))
    correlations = np.empty((len(times), n, n))
    quadratic = np.empty(len(times)) if pi is not None else None
    for k, t in enumerate(times):
        y = ensemble.actions_at(t).astype(np.float64) - ensemble.states_at(t)
        if np.any(np.abs(y) > 1.0):
            raise ValueError(f"residual outside [-1, 1] at t={t}")
        second[k] = np.mean(y * y, axis=0)
        means[k] = np.mean(y, axis=0)
        correlations[k] = _pearson(y)
        if quadratic is not None and pi is not None:
            quadratic[k] = float(np.mean((y @ pi.values) ** 2))
    logger.info(f"Residual moments at t={list(times)} over {ensemble.run_count} runs")
    return ResidualMoments(
        times=times,
        runs=ensemble.run_count,
        second_moments=second,
        means=means,
        correlations=correlations,
        pi_quadratic=quadratic,
    )


def _pearson(y: np.ndarray) -> np.ndarray:
    """Pearson correlation matrix of the columns of y; NaN where a column is constant."""
    centred = y - y.mean(axis=0)
    cov = centred.T @ centred
    sd = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = cov / np.outer(sd, sd)
    corr[(sd == 0.0)[:, None] | (sd == 0.0)[None, :]] = np.nan
    return corr


def one_step_martingale_check(
    x: np.ndarray,
    W: WeightMatrix,
    pi: PerronVector,
    alpha: float,
    samples: int,
    seed: int = 0,
) -> OneStepMartingaleCheck:
    """Mean of Delta q over `samples` resampled transitions from the fixed x.

    The prediction is mean 0 with variance alpha^2 sum_i pi_i^2 x_i (1 - x_i)
    per sample; `z` is the sample mean in units of its standard error.
    """
    if samples < 2:
        raise InvalidArgumentError(f"samples must be at least 2, got {samples}")
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if v.shape[0] != pi.n:
        raise DimensionMismatchError(f"x has {v.shape[0]} agents but pi has {pi.n} entries")
    _, nxt = resample_step(v, W, alpha, samples, seed=seed)
    dq = (nxt - v) @ pi.values
    mean = float(np.mean(dq))
    variance = float(alpha**2 * np.sum(pi.values**2 * v * (1.0 - v)))
    stderr = math.sqrt(variance / samples)
    z = mean / stderr if stderr > 0.0 else 0.0
    logger.info(f"One-step martingale check: mean dq={mean:.3e}, z={z:.2f} over {samples} samples")
    return OneStepMartingaleCheck(samples=samples, mean=mean, predicted_variance=variance, z=z)


def moment_decay(ensemble: Ensemble, times: Sequence[int], r: float = 2.0) -> MomentDecay:
    """E|x_t - x_inf|^r and E{(x_t (1 - x_t))^2} at each requested time.

    x_inf is each run's consensus corner; runs without a consensus verdict
    are left out of both moments.
    """
    if r <= 0:
        raise InvalidArgumentError(f"r must be positive, got {r}")
    limits = np.array(
        [
            1.0 if v.kind == ConsensusKind.CONSENSUS_1 else 0.0 if v.kind == ConsensusKind.CONSENSUS_0 else np.nan
            for v in ensemble.verdicts
        ]
    )
    used = ~np.isnan(limits)
    if not used.any():
        raise InvalidArgumentError("no run reached consensus; moment decay needs limits")
    times = tuple(int(t) for t in times)
    lr = np.empty(len(times))
    product = np.empty(len(times))
    for k, t in enumerate(times):
        states = ensemble.states_at(t)[used]
        lr[k] = float(np.mean(np.abs(states - limits[used, None]) ** r))
        product[k] = float(np.mean((states * (1.0 - states)) ** 2))
    return MomentDecay(times=times, r=r, runs_used=int(used.sum()), lr_moments=lr, product_moments=product)
