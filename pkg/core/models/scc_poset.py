"""Strongly connected component poset model"""

from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class SccPoset:
    """The strongly connected components of a network and their reachability order.

    `components[r]` holds the (0-based, ascending) agents of component r.
    Components are numbered by their smallest member, so the numbering is the
    same on every run and platform; printed labels are 1-based (C1, C2, ...).

    `order[r, s]` is True iff C_r <= C_s, i.e. some agent of C_s reaches some
    agent of C_r along directed edges: C_s influences C_r, possibly through
    intermediate components. The relation is reflexive, antisymmetric and
    transitive.

    `covers` holds (r, s) with C_r covered by C_s: C_r <= C_s, r != s and no
    third component sits between them. These are exactly the Hasse diagram
    edges, drawn from C_s down to C_r.

    `maximal` components are influenced by no other component (their dynamics
    are autonomous); `minimal` components influence no other component.
    """

    components: Tuple[Tuple[int, ...], ...]
    order: np.ndarray
    covers: FrozenSet[Tuple[int, int]]
    maximal: Tuple[int, ...]
    minimal: Tuple[int, ...]

    def __post_init__(self):
        m = len(self.components)
        members = [agent for comp in self.components for agent in comp]
        if m == 0 or any(not comp for comp in self.components):
            raise ValueError("SccPoset components must be nonempty")
        if sorted(members) != list(range(len(members))):
            raise ValueError("SccPoset components must partition the agents 0..n-1")
        order = np.array(self.order, dtype=bool, copy=True)
        if order.shape != (m, m):
            raise ValueError(f"SccPoset order must be {m} x {m}, got {order.shape}")
        if not order.diagonal().all():
            raise ValueError("SccPoset order must be reflexive")
        order.flags.writeable = False
        object.__setattr__(self, "order", order)

    @property
    def n_agents(self) -> int:
        return sum(len(comp) for comp in self.components)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def component_of(self, agent: int) -> int:
        """Index of the component containing `agent`."""
        for r, comp in enumerate(self.components):
            if agent in comp:
                return r
        raise IndexError(f"agent {agent} is not in this poset")

    def precedes(self, r: int, s: int) -> bool:
        """C_r <= C_s (C_s influences C_r)."""
        return bool(self.order[r, s])

    def upstream_maximal(self, r: int) -> Tuple[int, ...]:
        """Maximal components that (directly or indirectly) influence C_r.

        A maximal component is its own single upstream maximal element.
        """
        return tuple(s for s in self.maximal if self.order[r, s])

    def hasse_edges(self) -> List[Tuple[int, int]]:
        """Hasse diagram edges as (upper, lower) = (s, r) pairs, sorted."""
        return sorted((s, r) for r, s in self.covers)

    @staticmethod
    def label(r: int) -> str:
        """Printed 1-based component name."""
        return f"C{r + 1}"
