"""Network structure: weight-matrix validation, SCC decomposition and the
reachability poset over components.

Edge convention throughout: w_ij > 0 is an edge j -> i (agent j influences
agent i). A component C_s sits above C_r in the poset (C_r <= C_s) when some
agent of C_s reaches some agent of C_r, so the maximal components are the ones
nothing else influences.
"""

import logging
from importlib import resources
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from core.implementations.storage.weight_matrix_file import parse_weight_matrix
from core.models.scc_poset import SccPoset
from core.models.weight_matrix import WeightMatrix

logger = logging.getLogger(__name__)


def validate_weight_matrix(raw: Sequence[Sequence[float]]) -> WeightMatrix:
    """Accept a raw square array as a row-stochastic trust matrix.

    Entries are kept bit-exact; nothing is renormalised.

    Raises:
        NonSquareMatrixError, NegativeEntryError, RowSumViolationError.
    """
    return WeightMatrix(raw)


def _tarjan(n: int, successors: List[Tuple[int, ...]]) -> List[List[int]]:
    """Tarjan's single-pass SCC algorithm, iterative so deep graphs cannot
    exhaust the recursion limit. Components come out in reverse topological
    order; callers canonicalise."""
    index: Dict[int, int] = {}
    lowlink: Dict[int, int] = {}
    on_stack: Set[int] = set()
    stack: List[int] = []
    result: List[List[int]] = []
    counter = 0

    for root in range(n):
        if root in index:
            continue
        # Each frame: (node, position in its successor list).
        work: List[Tuple[int, int]] = [(root, 0)]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, pos = work[-1]
            succ = successors[node]
            if pos < len(succ):
                work[-1] = (node, pos + 1)
                nxt = succ[pos]
                if nxt not in index:
                    index[nxt] = lowlink[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, 0))
                elif nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                result.append(component)
    return result


def reachability(W: WeightMatrix) -> np.ndarray:
    """Agent-level transitive-reflexive closure.

    `reach[i, j]` is True iff a directed path (possibly empty) leads from
    agent i to agent j, i.e. i influences j directly or indirectly.
    """
    n = W.n
    reach = np.zeros((n, n), dtype=bool)
    for source in range(n):
        seen = {source}
        frontier = [source]
        while frontier:
            node = frontier.pop()
            for nxt in W.successors(node):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        reach[source, sorted(seen)] = True
    return reach


def strongly_connected_components(W: WeightMatrix) -> SccPoset:
    """Decompose the network into SCCs and build their reachability poset.

    Components are numbered by their smallest member agent. order[r, s] is
    C_r <= C_s; covers are the Hasse edges; maximal/minimal follow from order.
    """
    successors = [W.successors(j) for j in range(W.n)]
    raw = _tarjan(W.n, successors)
    components = tuple(sorted((tuple(sorted(c)) for c in raw), key=lambda c: c[0]))
    comp_of = {agent: r for r, comp in enumerate(components) for agent in comp}
    m = len(components)

    # Condensation DAG: upper -> lower whenever an agent of `upper` influences
    # an agent of `lower`.
    dag: List[Set[int]] = [set() for _ in range(m)]
    for source, target in W.edges():
        cs, cr = comp_of[source], comp_of[target]
        if cs != cr:
            dag[cs].add(cr)

    order = np.eye(m, dtype=bool)
    for s in range(m):
        frontier = list(dag[s])
        while frontier:
            r = frontier.pop()
            if not order[r, s]:
                order[r, s] = True
                frontier.extend(dag[r])

    covers = frozenset(
        (r, s)
        for r in range(m)
        for s in range(m)
        if r != s
        and order[r, s]
        and not any(order[r, t] and order[t, s] for t in range(m) if t not in (r, s))
    )
    maximal = tuple(r for r in range(m) if not any(order[r, s] for s in range(m) if s != r))
    minimal = tuple(r for r in range(m) if not any(order[s, r] for s in range(m) if s != r))
    logger.debug(f"SCC: {W.n} agents -> {m} components, {len(covers)} covers, maximal {maximal}")
    return SccPoset(components=components, order=order, covers=covers, maximal=maximal, minimal=minimal)


def is_irreducible(W: WeightMatrix) -> bool:
    """True iff the network is strongly connected (exactly one component)."""
    return strongly_connected_components(W).n_components == 1


def make_structurally_stubborn(W: WeightMatrix, agent: int) -> WeightMatrix:
    """Copy of W with `agent`'s row replaced by the unit self-loop.

    Such an agent listens only to itself; started at 0 or 1 it keeps that
    belief almost surely under the update rule.
    """
    entries = np.array(W.entries, copy=True)
    entries[agent, :] = 0.0
    entries[agent, agent] = 1.0
    return WeightMatrix(entries)


def four_component_network() -> WeightMatrix:
    """The packaged 7-agent network with components {v1}, {v2, v3}, {v4, v5},
    {v6, v7}: C1 and C3 are maximal, C4 is minimal and listens to both sides."""
    text = resources.files("core.data").joinpath("four_component_network.txt").read_text(encoding="utf-8")
    return parse_weight_matrix(text, source="four_component_network.txt")
