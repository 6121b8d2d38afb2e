"""Random trust matrices for property checks."""

import numpy as np

from core.models.weight_matrix import WeightMatrix


def row_normalise(raw: np.ndarray) -> np.ndarray:
    """Scale each row of a nonnegative array to sum to one."""
    return raw / raw.sum(axis=1, keepdims=True)


def random_irreducible_matrix(rng: np.random.Generator, n: int, density: float = 0.4) -> WeightMatrix:
    """A random row-stochastic matrix whose graph contains a Hamiltonian cycle
    over a random agent order (hence strongly connected), plus random extra
    edges with probability `density`."""
    order = rng.permutation(n)
    support = rng.random((n, n)) < density
    for k in range(n):
        listener, speaker = order[k], order[(k + 1) % n]
        support[listener, speaker] = True
    raw = np.where(support, rng.uniform(0.1, 1.0, size=(n, n)), 0.0)
    return WeightMatrix(row_normalise(raw))


def random_digraph_matrix(rng: np.random.Generator, n: int, density: float = 0.3) -> WeightMatrix:
    """A random row-stochastic matrix over an arbitrary digraph; agents that
    listen to nobody get a self-loop."""
    support = rng.random((n, n)) < density
    for i in range(n):
        if not support[i].any():
            support[i, i] = True
    raw = np.where(support, 1.0, 0.0)
    return WeightMatrix(row_normalise(raw))
