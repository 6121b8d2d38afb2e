"""Ensemble reports: the martingale prediction check and the summary tables the CLI writes."""

import logging
from typing import Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from core.exceptions import DimensionMismatchError, InvalidArgumentError, UndecidedRunsError
from core.models.opinion import OpinionState
from core.models.perron_vector import PerronVector
from core.models.scc_poset import SccPoset
from core.models.simulation import Ensemble
from core.models.statistics import ConsensusFractionReport
from core.models.verdict import ConsensusKind
from core.services.analysis_service import empirical_corner_probability

logger = logging.getLogger(__name__)


def consensus_fraction_report(
    ensemble: Ensemble,
    pi: PerronVector,
    x1: Union[OpinionState, Sequence[float]],
    confidence: float = 0.99,
) -> ConsensusFractionReport:
    """Compare the consensus-to-1 fraction with q_1 = pi^T x_1.

    With q_t a bounded martingale and every run ending in a consensus corner,
    P(consensus to 1) = q_1. The interval is the exact binomial
    (Clopper-Pearson) interval for the observed fraction.

    Raises:
        UndecidedRunsError: some run has an undecided verdict.
    """
    if not 0.0 < confidence < 1.0:
        raise InvalidArgumentError(f"confidence must lie in (0, 1), got {confidence!r}")
    x = x1.x if isinstance(x1, OpinionState) else np.asarray(x1, dtype=np.float64).reshape(-1)
    if x.shape[0] != pi.n:
        raise DimensionMismatchError(f"x1 has {x.shape[0]} agents but pi has {pi.n} entries")
    counts = ensemble.kind_counts()
    undecided = counts[ConsensusKind.UNDECIDED]
    if undecided:
        raise UndecidedRunsError(undecided)

    runs = ensemble.run_count
    ones = counts[ConsensusKind.CONSENSUS_1]
    predicted = float(np.clip(pi.values @ x, 0.0, 1.0))
    interval = stats.binomtest(ones, runs).proportion_ci(confidence_level=confidence, method="exact")
    report = ConsensusFractionReport(
        runs=runs,
        consensus_one=ones,
        consensus_zero=counts[ConsensusKind.CONSENSUS_0],
        non_consensus=counts[ConsensusKind.NON_CONSENSUS],
        fraction=ones / runs,
        predicted=predicted,
        ci_low=float(interval.low),
        ci_high=float(interval.high),
        confidence=confidence,
    )
    message = (
        f"Consensus fraction {report.fraction:.4f} ({ones}/{runs}), predicted {predicted:.4f}, "
        f"{confidence:.0%} CI [{report.ci_low:.4f}, {report.ci_high:.4f}]"
    )
    if report.agrees:
        logger.info(message)
    else:
        logger.warning(f"{message} - prediction outside the interval")
    return report


def verdict_frame(ensemble: Ensemble, scc: SccPoset) -> pd.DataFrame:
    """One row per run: run index, verdict kind, first_hit and each component's fate."""
    rows = []
    for run in ensemble.runs:
        row = {
            "run": run.run_index,
            "kind": run.verdict.kind.value,
            "first_hit": "" if run.verdict.first_hit is None else run.verdict.first_hit,
        }
        for r in range(scc.n_components):
            row[SccPoset.label(r)] = run.verdict.per_component[r].value
        rows.append(row)
    return pd.DataFrame(rows)


def corner_frame(ensemble: Ensemble, delta: float, times: Sequence[int] = ()) -> pd.DataFrame:
    """Corner-probability table, one row per time (t_max when `times` is empty)."""
    rows = []
    for t in times or (ensemble.t_max,):
        p = empirical_corner_probability(ensemble, t, delta)
        rows.append(
            {
                "t": p.t,
                "delta": p.delta,
                "runs": p.runs,
                "n_any": p.n_any,
                "n_zero": p.n_zero,
                "n_one": p.n_one,
                "n_mixed": p.n_mixed,
                "p_corner_any": p.p_corner_any,
                "p_zero": p.p_zero,
                "p_one": p.p_one,
                "p_mixed": p.p_mixed,
            }
        )
    return pd.DataFrame(rows)
