"""The Random Actions engine.

Each agent i holds an opinion x_{t,i} in [0, 1], takes action a_{t,i} = 1 with
probability x_{t,i}, and moves toward the weighted actions it observes:

    x_{t+1} = (1 - alpha) x_t + alpha W a_t

Runs are advanced in vectorised batches. A batch of one run is the
single-trajectory path, and every run reads only its own random stream, so a
run's trajectory does not depend on which batch (or thread) computed it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import StorageConfig
from core.exceptions import DimensionMismatchError, InvalidArgumentError
from core.models.opinion import ActionVector, OpinionState
from core.models.simulation import SimulationConfig, Trajectory
from core.models.statistics import TimeVariantResult
from core.models.weight_matrix import WeightMatrix
from core.utils.data_quality import check_trajectory
from core.utils.infinite_product import g_function
from core.utils.rng import BLOCK_STEPS, RunStream, run_generator

logger = logging.getLogger(__name__)

SCHEDULES = ("constant", "halving")


class RaEngine:
    """Vectorised one-step update for a fixed (W, alpha, stubborn set).

    States are (runs, n) arrays. W a is accumulated column by column in
    ascending agent order rather than through a BLAS product, so each run's
    result is bit-identical whatever the number of rows in the batch.
    """

    def __init__(self, W: WeightMatrix, alpha: float, stubborn_mask: Optional[np.ndarray] = None):
        self._alpha = alpha
        self._n = W.n
        self._columns = [(j, W.entries[:, j]) for j in range(W.n) if np.any(W.entries[:, j] > 0.0)]
        self._support = (W.entries > 0.0).astype(np.int64)
        self._degree = self._support.sum(axis=1)
        mask = np.zeros(W.n, dtype=bool) if stubborn_mask is None else np.asarray(stubborn_mask, dtype=bool)
        self._stubborn = mask if mask.any() else None

    @property
    def n(self) -> int:
        return self._n

    def observed(self, a: np.ndarray) -> np.ndarray:
        """W a for a (runs, n) block of actions.

        A row whose every in-neighbour acted 1 observes exactly 1.0, so the
        all-ones state is absorbing bit-for-bit even when the weights' float
        sum rounds below one.
        """
        af = a.astype(np.float64)
        wa = np.zeros(af.shape, dtype=np.float64)
        for j, column in self._columns:
            wa += af[:, j:j + 1] * column
        full = (a.astype(np.int64) @ self._support.T) == self._degree
        wa[full] = 1.0
        return wa

    def update(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        """x + alpha (W a - x), clipped to [0, 1], stubborn agents pinned."""
        nxt = x + self._alpha * (self.observed(a) - x)
        np.clip(nxt, 0.0, 1.0, out=nxt)
        if self._stubborn is not None:
            nxt[:, self._stubborn] = x[:, self._stubborn]
        return nxt


def stored_times(t_max: int, storage: StorageConfig) -> np.ndarray:
    """Times a trajectory keeps: all of 1..t_max up to `full_history_steps`;
    beyond that every k-th step plus the final `tail_steps` steps."""
    if t_max <= storage.full_history_steps:
        return np.arange(1, t_max + 1, dtype=np.int64)
    stride = math.ceil(t_max / storage.full_history_steps)
    strided = np.arange(1, t_max + 1, stride, dtype=np.int64)
    tail = np.arange(max(1, t_max - storage.tail_steps + 1), t_max + 1, dtype=np.int64)
    return np.union1d(strided, tail)


@dataclass
class BatchPlan:
    """What a batch run keeps besides the final state.

    `window` > 0 keeps the final `window` states; `delta` enables exact
    tracking of the last time each run was outside the 0- and 1-corners.
    """

    window: int = 0
    delta: Optional[float] = None
    sample_times: Tuple[int, ...] = ()
    record_actions: bool = False
    keep_history: bool = False
    storage: StorageConfig = field(default_factory=StorageConfig)


@dataclass
class BatchResult:
    """Per-run outputs of one batch; axis 0 indexes the batch's runs."""

    run_indices: List[int]
    final: np.ndarray
    window_states: Optional[np.ndarray] = None
    last_outside: Optional[Dict[int, np.ndarray]] = None
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    action_snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    history_times: Optional[np.ndarray] = None
    history: Optional[np.ndarray] = None
    actions: Optional[np.ndarray] = None


def run_batch(config: SimulationConfig, run_indices: Sequence[int], plan: BatchPlan) -> BatchResult:
    """Advance the runs `run_indices` of `config` together from t = 1 to t_max.

    Run r reads the stream keyed by (config.seed, r). Actions are drawn at
    t = 1..t_max-1.
    """
    n, t_max = config.n, config.t_max
    runs = len(run_indices)
    engine = RaEngine(config.W, config.alpha, config.stubborn_mask())
    streams = [RunStream(config.seed, r, n) for r in run_indices]
    x = np.tile(config.x1.x, (runs, 1))

    result = BatchResult(run_indices=list(run_indices), final=x)
    sample_set = set(plan.sample_times)

    window = min(plan.window, t_max)
    ring = np.empty((runs, window, n)) if window else None
    last_outside: Optional[Dict[int, np.ndarray]] = None
    if plan.delta is not None:
        last_outside = {0: np.zeros(runs, dtype=np.int64), 1: np.zeros(runs, dtype=np.int64)}

    times: Optional[np.ndarray] = None
    history: Optional[np.ndarray] = None
    next_slot = 0
    if plan.keep_history:
        times = stored_times(t_max, plan.storage)
        history = np.empty((runs, times.shape[0], n))
    dense_actions: Optional[np.ndarray] = None
    if plan.record_actions and plan.keep_history:
        if times is not None and times.shape[0] != t_max:
            raise InvalidArgumentError(
                f"recording actions needs a dense trajectory; t_max = {t_max} exceeds "
                f"full_history_steps = {plan.storage.full_history_steps}"
            )
        dense_actions = np.empty((runs, max(t_max - 1, 0), n), dtype=np.uint8)

    def record(t: int, state: np.ndarray) -> None:
        nonlocal next_slot
        if ring is not None:
            ring[:, (t - 1) % window] = state
        if last_outside is not None:
            last_outside[0][~np.all(state < plan.delta, axis=1)] = t
            last_outside[1][~np.all(state > 1.0 - plan.delta, axis=1)] = t
        if t in sample_set:
            result.snapshots[t] = state.copy()
        if times is not None and history is not None and next_slot < times.shape[0] and times[next_slot] == t:
            history[:, next_slot] = state
            next_slot += 1

    record(1, x)
    block = np.empty((runs, 0, n))
    offset = 0
    for t in range(1, t_max):
        if offset == block.shape[1]:
            steps = min(BLOCK_STEPS, t_max - t)
            block = np.stack([s.next_block(steps) for s in streams], axis=0)
            offset = 0
        a = block[:, offset, :] < x
        offset += 1
        if plan.record_actions and t in sample_set:
            result.action_snapshots[t] = a.astype(np.uint8)
        if dense_actions is not None:
            dense_actions[:, t - 1] = a
        x = engine.update(x, a)
        record(t + 1, x)

    result.final = x
    if ring is not None:
        result.window_states = np.roll(ring, -(t_max % window), axis=1)
    result.last_outside = last_outside
    result.history_times = times
    result.history = history
    result.actions = dense_actions
    return result


def batch_trajectory(config: SimulationConfig, batch: BatchResult, k: int) -> Trajectory:
    """The stored path of the k-th run of a batch that kept history."""
    if batch.history is None or batch.history_times is None:
        raise InvalidArgumentError("this batch did not keep trajectories")
    return Trajectory(
        times=batch.history_times,
        states=batch.history[k],
        alpha=config.alpha,
        actions=None if batch.actions is None else batch.actions[k],
        stubborn=config.stubborn,
        config_digest=config.digest(),
    )


def simulate(config: SimulationConfig, storage: Optional[StorageConfig] = None) -> Trajectory:
    """One trajectory of `config`, drawn from the stream (config.seed, 0).

    Identical configs give byte-identical trajectories, and the trajectory
    equals run 0 of monte_carlo(config, ...).
    """
    plan = BatchPlan(record_actions=config.record_actions, keep_history=True, storage=storage or StorageConfig())
    batch = run_batch(config, [0], plan)
    trajectory = batch_trajectory(config, batch, 0)
    check_trajectory(trajectory)
    logger.info(
        f"Simulated n={config.n}, alpha={config.alpha}, t_max={config.t_max}, seed={config.seed}: "
        f"{len(trajectory.times)} states stored"
    )
    return trajectory


def _as_vector(x: Union[OpinionState, np.ndarray, Sequence[float]]) -> np.ndarray:
    return x.x if isinstance(x, OpinionState) else np.asarray(x, dtype=np.float64).reshape(-1)


def sample_actions(x: OpinionState, rng_stream: Union[RunStream, np.random.Generator]) -> ActionVector:
    """Independent Bernoulli(x_i) actions, agents drawn in index order.

    a_i = 1 iff u_i < x_i for the next n uniforms of the stream.
    """
    if isinstance(rng_stream, RunStream):
        u = rng_stream.next_step()
    else:
        u = rng_stream.random(x.n)
    return ActionVector(a=(u < x.x).astype(np.uint8))


def step(
    x: OpinionState,
    a: ActionVector,
    W: WeightMatrix,
    alpha: float,
    stubborn: FrozenSet[int] = frozenset(),
) -> OpinionState:
    """One application of the update rule; stubborn agents keep their opinion.

    Raises:
        DimensionMismatchError: x, a and W disagree on the agent count.
    """
    if not (x.n == a.n == W.n):
        raise DimensionMismatchError(f"x has {x.n} agents, a has {a.n}, W is {W.n} x {W.n}")
    mask = np.zeros(W.n, dtype=bool)
    mask[sorted(stubborn)] = True
    engine = RaEngine(W, alpha, mask)
    nxt = engine.update(x.x[None, :].copy(), a.a[None, :])[0]
    return OpinionState(t=x.t + 1, x=nxt)


def conditional_mean_step(x: Union[OpinionState, np.ndarray], W: WeightMatrix, alpha: float) -> np.ndarray:
    """E{x_{t+1} | x_t = x} = (1 - alpha) x + alpha W x."""
    v = _as_vector(x)
    if v.shape[0] != W.n:
        raise DimensionMismatchError(f"x has {v.shape[0]} agents but W is {W.n} x {W.n}")
    return (1.0 - alpha) * v + alpha * (W.entries @ v)


def resample_step(
    x: Union[OpinionState, np.ndarray],
    W: WeightMatrix,
    alpha: float,
    samples: int,
    seed: int = 0,
    stubborn: FrozenSet[int] = frozenset(),
) -> Tuple[np.ndarray, np.ndarray]:
    """`samples` independent one-step transitions from the same state x.

    Returns (actions, next_states), both samples x n.
    """
    v = _as_vector(x)
    if v.shape[0] != W.n:
        raise DimensionMismatchError(f"x has {v.shape[0]} agents but W is {W.n} x {W.n}")
    mask = np.zeros(W.n, dtype=bool)
    mask[sorted(stubborn)] = True
    u = run_generator(seed, 0).random((samples, W.n))
    a = u < v
    nxt = RaEngine(W, alpha, mask).update(np.tile(v, (samples, 1)), a)
    return a.astype(np.uint8), nxt


def time_variant_two_agent(
    beta: float,
    schedule: str,
    x0: Sequence[float],
    T: int,
) -> TimeVariantResult:
    """Deterministic averaging x_{t+1} = W_t x_t with
    W_t = [[1 - b_t, b_t], [b_t, 1 - b_t]] for t = 0..T-1.

    `constant` uses b_t = beta and converges to (1/2) 1 1^T (the identity when
    beta = 0). `halving` uses b_t = beta / 2^t; W_t's second eigenvalue is
    1 - 2 b_t, so the product converges to U diag(1, g(1/2, 1, 2 beta)) U^T with
    U = [[1, -1], [1, 1]] / sqrt(2) and the agents never agree.
    """
    if schedule not in SCHEDULES:
        raise InvalidArgumentError(f"schedule must be one of {SCHEDULES}, got {schedule!r}")
    if not 0.0 <= beta <= 0.5:
        raise InvalidArgumentError(f"beta must lie in [0, 1/2], got {beta!r}")
    if T < 0:
        raise InvalidArgumentError(f"T must be nonnegative, got {T}")
    x = np.asarray(x0, dtype=np.float64).reshape(-1)
    if x.shape[0] != 2:
        raise DimensionMismatchError(f"x0 must have 2 entries, got {x.shape[0]}")

    betas = np.array([beta if schedule == "constant" else beta / 2.0**t for t in range(T)])
    trajectory = np.empty((T + 1, 2))
    trajectory[0] = x
    product = np.eye(2)
    for t, b in enumerate(betas):
        W_t = np.array([[1.0 - b, b], [b, 1.0 - b]])
        trajectory[t + 1] = W_t @ trajectory[t]
        product = W_t @ product

    if schedule == "constant":
        limit = np.eye(2) if beta == 0.0 else np.full((2, 2), 0.5)
    else:
        U = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)
        limit = U @ np.diag([1.0, g_function(0.5, 1, 2.0 * beta)]) @ U.T
    logger.debug(f"Time-variant {schedule} schedule, beta={beta}, T={T}: gap {abs(trajectory[-1, 0] - trajectory[-1, 1]):.3e}")
    return TimeVariantResult(trajectory=trajectory, product=product, limit_matrix=limit, betas=betas)
