"""Simulation configuration, trajectory and ensemble models"""

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from core.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    MissingActionsError,
    TrajectoryTooShortError,
)
from core.models.opinion import OpinionState
from core.models.verdict import ConsensusKind, ConvergenceVerdict
from core.models.weight_matrix import WeightMatrix

MAX_SEED = 2**64 - 1


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """Everything that determines one RA trajectory.

    `stubborn` holds 0-based agent indices whose opinion the engine pins at its
    initial value. A stubborn agent must either start in {0, 1} or be
    structurally stubborn (its W row is the unit self-loop): those are the two
    cases in which an agent's belief is constant almost surely anyway.
    """

    W: WeightMatrix
    alpha: float
    x1: OpinionState
    t_max: int
    seed: int = 0
    stubborn: FrozenSet[int] = frozenset()
    record_actions: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidArgumentError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        x1 = self.x1 if isinstance(self.x1, OpinionState) else OpinionState(t=1, x=np.asarray(self.x1))
        if x1.t != 1:
            raise InvalidArgumentError(f"initial state must be at t = 1, got t = {x1.t}")
        if x1.n != self.W.n:
            raise DimensionMismatchError(f"x1 has {x1.n} agents but W is {self.W.n} x {self.W.n}")
        object.__setattr__(self, "x1", x1)
        if self.t_max < 1:
            raise InvalidArgumentError(f"t_max must be a positive integer, got {self.t_max}")
        if not 0 <= self.seed <= MAX_SEED:
            raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        stubborn = frozenset(int(k) for k in self.stubborn)
        for k in sorted(stubborn):
            if not 0 <= k < self.W.n:
                raise InvalidArgumentError(f"stubborn agent {k} is out of range for {self.W.n} agents")
            if x1.x[k] not in (0.0, 1.0) and not self.W.is_unit_self_loop(k):
                raise InvalidArgumentError(
                    f"stubborn agent {k} starts at {x1.x[k]!r}; it must start at 0 or 1 "
                    "unless its row of W is the unit self-loop"
                )
        object.__setattr__(self, "stubborn", stubborn)

    @property
    def n(self) -> int:
        return self.W.n

    def stubborn_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[sorted(self.stubborn)] = True
        return mask

    def digest(self) -> str:
        """SHA-256 of a canonical rendering of every field.

        Floats are rendered with float.hex so the digest changes iff a value
        changes bit-wise.
        """
        payload = {
            "W": [[float(v).hex() for v in row] for row in self.W.entries],
            "alpha": float(self.alpha).hex(),
            "x1": [float(v).hex() for v in self.x1.x],
            "t_max": self.t_max,
            "seed": self.seed,
            "stubborn": sorted(self.stubborn),
            "record_actions": self.record_actions,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One sample path of opinions, optionally with the actions that drove it.

    `states[k]` is the state at time `times[k]`. A dense trajectory stores
    every t = 1..t_max; a long one stores strided snapshots plus a dense final
    tail (see StorageConfig). `actions[k]` is a_{k+1}, the actions drawn at
    t = k + 1 that produced states at t = k + 2; actions are only recorded for
    dense trajectories.
    """

    times: np.ndarray
    states: np.ndarray
    alpha: Optional[float] = None
    actions: Optional[np.ndarray] = None
    stubborn: FrozenSet[int] = frozenset()
    config_digest: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.int64).reshape(-1)
        states = np.asarray(self.states, dtype=np.float64)
        if states.ndim != 2 or states.shape[0] != times.shape[0] or states.shape[0] == 0:
            raise DimensionMismatchError(
                f"Trajectory needs one state row per time, got times {times.shape} and states {states.shape}"
            )
        if times[0] < 1 or np.any(np.diff(times) <= 0):
            raise ValueError("Trajectory times must be strictly increasing and start at t >= 1")
        if self.actions is not None:
            actions = np.asarray(self.actions, dtype=np.uint8)
            if actions.shape != (states.shape[0] - 1, states.shape[1]) or not self._is_dense(times):
                raise DimensionMismatchError("actions need a dense trajectory and one row per transition")
            object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "stubborn", frozenset(self.stubborn))

    @classmethod
    def from_states(cls, states: Sequence[Sequence[float]], alpha: Optional[float] = None) -> "Trajectory":
        """Dense trajectory from an explicit sequence of states, starting at t = 1.

        A flat sequence of scalars is read as a single-agent path.
        """
        arr = np.asarray(states, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls(times=np.arange(1, arr.shape[0] + 1), states=arr, alpha=alpha)

    @staticmethod
    def _is_dense(times: np.ndarray) -> bool:
        return bool(times[0] == 1 and times[-1] == times.shape[0])

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def t_max(self) -> int:
        return int(self.times[-1])

    @property
    def dense(self) -> bool:
        return self._is_dense(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return self.t_max

    def state_at(self, t: int) -> np.ndarray:
        """The stored state at time t."""
        k = int(np.searchsorted(self.times, t))
        if k >= self.times.shape[0] or self.times[k] != t:
            raise InvalidArgumentError(f"time {t} is not stored in this trajectory")
        return self.states[k]

    def tail(self, window: int) -> Tuple[np.ndarray, np.ndarray]:
        """(times, states) of the final `window` consecutive steps.

        Raises:
            TrajectoryTooShortError: fewer than `window` consecutive final
                steps are stored.
        """
        if window > self.times.shape[0]:
            raise TrajectoryTooShortError(f"window {window} exceeds the {self.times.shape[0]} stored states")
        times = self.times[-window:]
        if times[-1] - times[0] != window - 1:
            raise TrajectoryTooShortError(f"the final {window} stored states are not consecutive steps")
        return times, self.states[-window:]

    def check_update_rule(self, W: WeightMatrix) -> float:
        """Largest deviation of the stored path from x' = (1-a)x + aWa.

        Stubborn agents are compared against their pinned value instead.
        """
        if self.actions is None:
            raise MissingActionsError("this trajectory did not record actions")
        if self.alpha is None:
            raise InvalidArgumentError("this trajectory does not carry its alpha")
        if W.n != self.n:
            raise DimensionMismatchError(f"W is {W.n} x {W.n} but the trajectory has {self.n} agents")
        x = self.states[:-1]
        predicted = (1.0 - self.alpha) * x + self.alpha * (self.actions.astype(np.float64) @ W.entries.T)
        if self.stubborn:
            pinned = sorted(self.stubborn)
            predicted[:, pinned] = x[:, pinned]
        if predicted.shape[0] == 0:
            return 0.0
        return float(np.max(np.abs(self.states[1:] - predicted)))

    def to_frame(self) -> pd.DataFrame:
        """`t, x1, ..., xN` frame, one row per stored step."""
        frame = pd.DataFrame(self.states, columns=[f"x{i + 1}" for i in range(self.n)])
        frame.insert(0, "t", self.times)
        return frame


@dataclass(frozen=True, eq=False)
class RunSummary:
    """What an ensemble keeps of one run.

    `snapshots[t]` / `action_snapshots[t]` hold x_t and a_t for each sampled
    time. `trajectory` is only kept when the ensemble was asked to.
    """

    run_index: int
    verdict: ConvergenceVerdict
    final_state: np.ndarray
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    action_snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    trajectory: Optional[Trajectory] = None


@dataclass(frozen=True, eq=False)
class Ensemble:
    """A seeded collection of independent runs of one configuration.

    Run r draws from the stream keyed by (master_seed, r), so the collection
    is the same whatever the thread count or batch size that produced it.
    """

    runs: Tuple[RunSummary, ...]
    master_seed: int
    run_count: int
    config_digest: str = ""
    t_max: int = 0
    delta: float = 0.05
    window: int = 50
    sample_times: Tuple[int, ...] = ()
    recorded_actions: bool = False

    def __post_init__(self):
        runs = tuple(sorted(self.runs, key=lambda r: r.run_index))
        if len(runs) != self.run_count:
            raise ValueError(f"Ensemble expected {self.run_count} runs, got {len(runs)}")
        if [r.run_index for r in runs] != list(range(self.run_count)):
            raise ValueError("Ensemble run indices must be exactly 0..run_count-1")
        object.__setattr__(self, "runs", runs)
        object.__setattr__(self, "sample_times", tuple(sorted(set(self.sample_times))))

    @property
    def verdicts(self) -> Tuple[ConvergenceVerdict, ...]:
        return tuple(r.verdict for r in self.runs)

    def kind_counts(self) -> Dict[ConsensusKind, int]:
        """Runs per verdict kind, every kind present (zero when absent)."""
        counts = Counter(r.verdict.kind for r in self.runs)
        return {kind: counts.get(kind, 0) for kind in ConsensusKind}

    def states_at(self, t: int) -> np.ndarray:
        """runs x n array of x_t across runs."""
        if t == self.t_max:
            return np.stack([r.final_state for r in self.runs])
        if t not in self.sample_times:
            raise InvalidArgumentError(f"time {t} was not sampled; sampled times: {list(self.sample_times)}")
        return np.stack([r.snapshots[t] for r in self.runs])

    def actions_at(self, t: int) -> np.ndarray:
        """runs x n array of a_t across runs."""
        if not self.recorded_actions or t not in self.sample_times:
            raise MissingActionsError(f"actions at time {t} were not recorded")
        if t >= self.t_max:
            raise MissingActionsError(f"no actions are drawn at the horizon t = {t}")
        return np.stack([r.action_snapshots[t] for r in self.runs])
