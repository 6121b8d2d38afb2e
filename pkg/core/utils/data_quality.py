"""Cross-record data-quality gates at the stage transitions.

These complement the per-record validation in the model dataclasses
(`OpinionState` / `SimulationConfig` `__post_init__`): instead of checking one
value in isolation, each gate checks a property only visible across a whole
trajectory or ensemble - that counts reconcile (no run silently dropped) or
that a path never left the unit cube.

Threshold-free. The gates observe and log; they never raise.
"""

import logging

import numpy as np

from core.models.simulation import Ensemble, Trajectory
from core.models.statistics import CornerProbabilities
from core.models.verdict import ConsensusKind

logger = logging.getLogger(__name__)


def check_trajectory(trajectory: Trajectory) -> None:
    """Simulation gate: every stored opinion lies in [0, 1].

    The update is a convex combination, so an opinion outside the cube means
    the engine itself is broken, not the input.
    """
    states = trajectory.states
    outside = int(np.count_nonzero((states < 0.0) | (states > 1.0) | ~np.isfinite(states)))
    logger.debug(f"Trajectory data quality: {states.shape[0]} states x {states.shape[1]} agents checked")
    if outside:
        logger.error(f"Trajectory data quality: {outside} stored opinions outside [0, 1]")


def check_ensemble(ensemble: Ensemble) -> None:
    """Ensemble gate: verdict counts reconcile with the run count.

    Undecided runs are expected at short horizons but are reported, never
    dropped, so they show up here at WARNING.
    """
    counts = ensemble.kind_counts()
    summary = ", ".join(f"{kind.value}={count}" for kind, count in counts.items())
    logger.info(f"Ensemble data quality: {ensemble.run_count} runs -> {summary}")
    if sum(counts.values()) != ensemble.run_count:
        logger.error(
            f"Ensemble data quality: verdict counts sum to {sum(counts.values())}, "
            f"expected {ensemble.run_count}"
        )
    undecided = counts[ConsensusKind.UNDECIDED]
    if undecided:
        logger.warning(
            f"Ensemble data quality: {undecided}/{ensemble.run_count} runs undecided at "
            f"t_max={ensemble.t_max} (delta={ensemble.delta}, window={ensemble.window})"
        )


def check_corner_probabilities(probabilities: CornerProbabilities) -> None:
    """Corner gate: any-corner count equals zero + one + mixed counts."""
    p = probabilities
    logger.info(
        f"Corner data quality: t={p.t}, {p.n_any}/{p.runs} runs in a corner "
        f"({p.n_zero} zero, {p.n_one} one, {p.n_mixed} mixed)"
    )
    if p.n_any != p.n_zero + p.n_one + p.n_mixed or p.n_any > p.runs:
        logger.error(
            f"Corner data quality: counts do not reconcile - {p.n_any} in a corner != "
            f"{p.n_zero} + {p.n_one} + {p.n_mixed}"
        )
