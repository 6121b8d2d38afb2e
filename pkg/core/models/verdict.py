"""Convergence verdict models"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

from core.exceptions import InvalidArgumentError, InvalidDeltaError


class ConsensusKind(str, Enum):
    """Run-level classification. Single source of truth for the strings the
    CSV summaries emit."""
    CONSENSUS_0 = "consensus_0"
    CONSENSUS_1 = "consensus_1"
    NON_CONSENSUS = "non_consensus"
    UNDECIDED = "undecided"


class ComponentFate(str, Enum):
    """Per-component classification over the final window."""
    TO_0 = "to_0"
    TO_1 = "to_1"
    OSCILLATING = "oscillating"  # evidence it never settles; rules in classify_final_window
    UNDECIDED = "undecided"      # not settled yet, no evidence it never will


# Fate -> the corner it settled in.
SETTLED_CORNER: Dict[ComponentFate, int] = {ComponentFate.TO_0: 0, ComponentFate.TO_1: 1}


def validate_delta(delta: float) -> float:
    """Corner radius must lie in (0, 1/2) so the 0- and 1-corners are disjoint."""
    if not 0.0 < delta < 0.5:
        raise InvalidDeltaError(f"delta must lie in (0, 1/2), got {delta!r}")
    return delta


@dataclass(frozen=True)
class AnalysisConfig:
    """Corner radius, persistence window and horizon for verdicts."""
    delta: float = 0.05
    window: int = 50
    t_max: Optional[int] = None

    def __post_init__(self):
        validate_delta(self.delta)
        if self.window < 1:
            raise InvalidArgumentError(f"window must be a positive integer, got {self.window}")
        if self.t_max is not None and self.t_max < 1:
            raise InvalidArgumentError(f"t_max must be a positive integer, got {self.t_max}")


@dataclass(frozen=True)
class ConvergenceVerdict:
    """The classification of one run.

    `per_component` maps SCC index (0-based) to its fate. `first_hit` is the
    time the run entered the consensus corner for good (the start of the final
    stretch spent in it); None unless the run reached consensus.

    kind = consensus_c exactly when every component is to_c.
    """

    kind: ConsensusKind
    per_component: Dict[int, ComponentFate] = field(default_factory=dict)
    first_hit: Optional[int] = None

    def __post_init__(self):
        fates = set(self.per_component.values())
        for kind, fate in (
            (ConsensusKind.CONSENSUS_0, ComponentFate.TO_0),
            (ConsensusKind.CONSENSUS_1, ComponentFate.TO_1),
        ):
            all_fate = bool(fates) and fates == {fate}
            if (self.kind == kind) != all_fate:
                raise ValueError(f"verdict {self.kind.value} disagrees with component fates {sorted(f.value for f in fates)}")
        # Non-consensus needs evidence: an oscillating component or components
        # settled in both corners.
        if self.kind == ConsensusKind.NON_CONSENSUS and not (
            ComponentFate.OSCILLATING in fates or {ComponentFate.TO_0, ComponentFate.TO_1} <= fates
        ):
            raise ValueError("non_consensus verdict without an oscillating component or split limits")
        if self.first_hit is not None and self.kind not in (ConsensusKind.CONSENSUS_0, ConsensusKind.CONSENSUS_1):
            raise ValueError("first_hit is only defined for consensus verdicts")

    @property
    def decided(self) -> bool:
        return self.kind != ConsensusKind.UNDECIDED
