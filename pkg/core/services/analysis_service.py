"""Corner events, convergence verdicts and corner probabilities.

A state x is in the corner m of the unit cube (radius delta) when every
x_i < delta for m_i = 0 and x_i > 1 - delta for m_i = 1. With delta < 1/2 a
state is in at most one corner.
"""

import logging
from typing import Dict, Optional, Tuple, Union

import numpy as np

from core.exceptions import InvalidArgumentError
from core.models.opinion import OpinionState
from core.models.scc_poset import SccPoset
from core.models.simulation import Ensemble, Trajectory
from core.models.statistics import CornerLabel, CornerProbabilities
from core.models.verdict import (
    SETTLED_CORNER,
    AnalysisConfig,
    ComponentFate,
    ConsensusKind,
    ConvergenceVerdict,
    validate_delta,
)
from core.models.weight_matrix import WeightMatrix
from core.utils.data_quality import check_corner_probabilities
from core.utils.infinite_product import truncated_product

logger = logging.getLogger(__name__)


def corner_event(x: Union[OpinionState, np.ndarray], delta: float) -> Optional[CornerLabel]:
    """The corner label of x, or None when some x_i lies in [delta, 1 - delta].

    Raises:
        InvalidDeltaError: delta outside (0, 1/2).
    """
    validate_delta(delta)
    v = x.x if isinstance(x, OpinionState) else np.asarray(x, dtype=np.float64).reshape(-1)
    low = v < delta
    high = v > 1.0 - delta
    if not np.all(low | high):
        return None
    return CornerLabel(m=tuple(high.astype(int).tolist()))


def _component_fate(
    window_states: np.ndarray, members: Tuple[int, ...], delta: float
) -> Optional[int]:
    """0 or 1 when every member stayed in that corner for the whole window."""
    block = window_states[:, list(members)]
    if np.all(block < delta):
        return 0
    if np.all(block > 1.0 - delta):
        return 1
    return None


def _alternates_between_corners(
    window_states: np.ndarray, members: Tuple[int, ...], delta: float
) -> bool:
    """True when every window row has the members in a common corner and that
    corner flips on every step."""
    if window_states.shape[0] < 2:
        return False
    block = window_states[:, list(members)]
    low = np.all(block < delta, axis=1)
    high = np.all(block > 1.0 - delta, axis=1)
    if not np.all(low | high):
        return False
    return bool(np.all(high[1:] != high[:-1]))


def classify_final_window(
    window_states: np.ndarray,
    scc: SccPoset,
    delta: float,
    first_hit: Optional[Dict[int, int]] = None,
) -> ConvergenceVerdict:
    """Verdict from the last `window` states (rows oldest first).

    A component is to_c when all its agents stay within delta of c for the
    whole window. An unsettled component is oscillating when

    - the maximal components upstream of it have all settled but disagree, or
    - every maximal component has settled and one of its agents swings across
      a range of at least 1 - 2 delta inside the window, or
    - it is maximal itself and jumps between the 0- and 1-corner on every step
      of the window.

    Everything else is undecided.

    `first_hit` maps corner c to the time the run entered c for good; it is
    attached only to consensus verdicts.
    """
    window_states = np.asarray(window_states, dtype=np.float64)
    settled: Dict[int, Optional[int]] = {
        r: _component_fate(window_states, comp, delta) for r, comp in enumerate(scc.components)
    }
    ranges = window_states.max(axis=0) - window_states.min(axis=0)
    maximal_settled = all(settled[s] is not None for s in scc.maximal)
    maximal = set(scc.maximal)

    fates: Dict[int, ComponentFate] = {}
    for r, comp in enumerate(scc.components):
        corner = settled[r]
        if corner is not None:
            fates[r] = ComponentFate.TO_1 if corner == 1 else ComponentFate.TO_0
            continue
        if r in maximal:
            oscillating = _alternates_between_corners(window_states, comp, delta)
        else:
            upstream = [settled[s] for s in scc.upstream_maximal(r)]
            pulled_apart = bool(upstream) and None not in upstream and len(set(upstream)) > 1
            swinging = maximal_settled and bool(np.any(ranges[list(comp)] >= 1.0 - 2.0 * delta))
            oscillating = pulled_apart or swinging
        fates[r] = ComponentFate.OSCILLATING if oscillating else ComponentFate.UNDECIDED

    values = set(fates.values())
    maximal_limits = {settled[r] for r in scc.maximal}
    if values == {ComponentFate.TO_0} or values == {ComponentFate.TO_1}:
        kind = ConsensusKind.CONSENSUS_1 if values == {ComponentFate.TO_1} else ConsensusKind.CONSENSUS_0
        hit = None
        if first_hit is not None:
            hit = first_hit[SETTLED_CORNER[next(iter(values))]]
        return ConvergenceVerdict(kind=kind, per_component=fates, first_hit=hit)
    if ComponentFate.OSCILLATING in values or (None not in maximal_limits and len(maximal_limits) > 1):
        return ConvergenceVerdict(kind=ConsensusKind.NON_CONSENSUS, per_component=fates)
    return ConvergenceVerdict(kind=ConsensusKind.UNDECIDED, per_component=fates)


def _first_hit_from_states(times: np.ndarray, states: np.ndarray, delta: float) -> Dict[int, int]:
    """Earliest stored time of the final stretch spent in each consensus corner."""
    hits: Dict[int, int] = {}
    for corner, inside in ((0, np.all(states < delta, axis=1)), (1, np.all(states > 1.0 - delta, axis=1))):
        outside = np.nonzero(~inside)[0]
        start = 0 if outside.size == 0 else int(outside[-1]) + 1
        hits[corner] = int(times[min(start, len(times) - 1)])
    return hits


def detect_consensus(traj: Trajectory, scc: SccPoset, cfg: AnalysisConfig) -> ConvergenceVerdict:
    """Classify one trajectory from its final `cfg.window` steps.

    Raises:
        TrajectoryTooShortError: fewer than `window` consecutive final steps
            are stored.
    """
    _, window_states = traj.tail(cfg.window)
    first_hit = _first_hit_from_states(traj.times, traj.states, cfg.delta)
    return classify_final_window(window_states, scc, cfg.delta, first_hit)


def _corner_masks(states: np.ndarray, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    validate_delta(delta)
    return states < delta, states > 1.0 - delta


def empirical_corner_probability(ensemble: Ensemble, t: int, delta: float) -> CornerProbabilities:
    """Fractions of runs whose x_t lies in any corner, the 0-corner, the
    1-corner, and a mixed corner (counts kept alongside)."""
    if not 1 <= t <= ensemble.t_max:
        raise InvalidArgumentError(f"t must lie in 1..{ensemble.t_max}, got {t}")
    low, high = _corner_masks(ensemble.states_at(t), delta)
    in_corner = np.all(low | high, axis=1)
    zero = np.all(low, axis=1)
    one = np.all(high, axis=1)
    mixed = in_corner & ~zero & ~one
    probabilities = CornerProbabilities(
        t=t,
        delta=delta,
        runs=ensemble.run_count,
        n_any=int(in_corner.sum()),
        n_zero=int(zero.sum()),
        n_one=int(one.sum()),
        n_mixed=int(mixed.sum()),
    )
    check_corner_probabilities(probabilities)
    return probabilities


def agent_corner_probability(ensemble: Ensemble, t: int, delta: float) -> np.ndarray:
    """Per agent, the fraction of runs with x_{t,i} within delta of 0 or 1."""
    low, high = _corner_masks(ensemble.states_at(t), delta)
    return (low | high).mean(axis=0)


def edge_mixed_corner_probability(
    ensemble: Ensemble, t: int, delta: float, k: int, l: int
) -> Tuple[float, float]:
    """(P(x_{t,k} < delta and x_{t,l} > 1 - delta), and the mirrored event).

    For l an in-neighbour of k these are bounded by delta plus a vanishing
    term once delta <= mixed_corner_delta_bound(W, alpha, k, l).
    """
    low, high = _corner_masks(ensemble.states_at(t), delta)
    return float(np.mean(low[:, k] & high[:, l])), float(np.mean(high[:, k] & low[:, l]))


def mixed_corner_delta_bound(W: WeightMatrix, alpha: float, k: int, l: int) -> float:
    """Largest corner radius min{alpha w_kl, (1 - alpha)/(2 - alpha)} for
    which agents k and l can only rarely sit in opposite corners.

    Raises:
        InvalidArgumentError: w_kl = 0 (l does not influence k) or alpha
            outside (0, 1).
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    w_kl = float(W.entries[k, l])
    if w_kl == 0.0:
        raise InvalidArgumentError(f"agent {l} does not influence agent {k} (w_kl = 0)")
    return min(alpha * w_kl, (1.0 - alpha) / (2.0 - alpha))


def corner_persistence_bound(alpha: float, N: int, delta: float, S: int) -> float:
    """prod_{s=0}^{S-1} (1 - (1 - alpha)^s delta)^N.

    Lower bound on the probability that a run inside a consensus corner of
    radius delta takes the corner's action for the next S steps (the corner
    contracts by 1 - alpha each such step).
    """
    validate_delta(delta)
    if S < 0:
        raise InvalidArgumentError(f"S must be nonnegative, got {S}")
    return truncated_product(alpha, N, delta, S - 1)


def empirical_corner_persistence(ensemble: Ensemble, t: int, delta: float) -> Tuple[int, int]:
    """(runs inside a consensus corner at time t, how many of those ended in
    consensus to that same corner)."""
    low, high = _corner_masks(ensemble.states_at(t), delta)
    kinds = np.array([v.kind for v in ensemble.verdicts], dtype=object)
    zero = np.all(low, axis=1)
    one = np.all(high, axis=1)
    inside = int(zero.sum() + one.sum())
    stayed = int(np.sum(zero & (kinds == ConsensusKind.CONSENSUS_0)) + np.sum(one & (kinds == ConsensusKind.CONSENSUS_1)))
    logger.debug(f"Corner persistence at t={t}: {stayed}/{inside} runs stayed")
    return inside, stayed
