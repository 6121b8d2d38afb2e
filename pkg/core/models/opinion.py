"""Opinion state and action vector models"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class OpinionState:
    """Opinions x_t in [0, 1]^n at time t.

    x_{t,i} is the probability that agent i takes action 1 at time t. Time is
    1-based: the initial state is t = 1.
    """

    t: int
    x: np.ndarray

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"OpinionState time must be >= 1, got {self.t}")
        x = np.array(self.x, dtype=np.float64, copy=True).reshape(-1)
        if x.size == 0:
            raise ValueError("OpinionState needs at least one agent")
        if not np.all((x >= 0.0) & (x <= 1.0)):
            raise ValueError("OpinionState opinions must lie in [0, 1]")
        x.flags.writeable = False
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True, eq=False)
class ActionVector:
    """Binary actions a_t in {0, 1}^n drawn at one time step."""

    a: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.a).reshape(-1)
        if raw.size == 0:
            raise ValueError("ActionVector needs at least one agent")
        if not np.all((raw == 0) | (raw == 1)):
            raise ValueError("ActionVector entries must be 0 or 1")
        a = raw.astype(np.uint8)
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.shape[0]
