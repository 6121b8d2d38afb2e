"""Damped power iteration for the left Perron vector."""

import logging
import math
from typing import Tuple

import numpy as np

from config.settings import SpectralConfig
from core.exceptions import NoConvergenceError
from core.interfaces.stationary_solver import IStationarySolver
from core.models.perron_vector import PerronVector
from core.models.weight_matrix import WeightMatrix

logger = logging.getLogger(__name__)


def left_residual(W: WeightMatrix, v: np.ndarray) -> float:
    """||v^T W - v^T||_inf."""
    return float(np.max(np.abs(v @ W.entries - v)))


def bordered_system(W: WeightMatrix) -> np.ndarray:
    """W^T - I with its last row replaced by ones (the sum constraint)."""
    system = W.entries.T - np.eye(W.n)
    system[-1, :] = 1.0
    return system


class DampedPowerIteration(IStationarySolver):
    """Iterates v <- d v + (1 - d) W^T v from the uniform vector, renormalising
    in l1 every step.

    Any damping d in (0, 1) keeps the fixed point and removes the periodic
    part of the spectrum, so the 2-agent swap matrix converges. Once the
    residual is below tol, up to `polish_iters` further steps are taken while
    the residual keeps strictly decreasing. The iterate is then refined with
    up to `refine_steps` corrections from the bordered linear system, which
    brings the residual down to round-off; a correction that does not lower
    the residual is discarded.
    """

    def __init__(self, config: SpectralConfig):
        if not 0.0 < config.damping < 1.0:
            raise ValueError(f"damping must lie in (0, 1), got {config.damping}")
        self._config = config

    def get_name(self) -> str:
        return "power"

    def _advance(self, W: WeightMatrix, v: np.ndarray) -> np.ndarray:
        d = self._config.damping
        nxt = d * v + (1.0 - d) * (W.entries.T @ v)
        return nxt / math.fsum(nxt)

    def _refine(self, W: WeightMatrix, v: np.ndarray, residual: float) -> Tuple[np.ndarray, float]:
        system = bordered_system(W)
        for _ in range(self._config.refine_steps):
            rhs = v - W.entries.T @ v
            rhs[-1] = 0.0
            try:
                correction = np.linalg.solve(system, rhs)
            except np.linalg.LinAlgError:
                break
            candidate = v + correction
            candidate = candidate / math.fsum(candidate)
            if not np.all(candidate > 0.0):
                break
            candidate_residual = left_residual(W, candidate)
            if candidate_residual >= residual:
                break
            v, residual = candidate, candidate_residual
        return v, residual

    def solve(self, W: WeightMatrix, tol: float, max_iters: int) -> PerronVector:
        v = np.full(W.n, 1.0 / W.n)
        residual = left_residual(W, v)
        iterations = 0
        while residual > tol:
            if iterations >= max_iters:
                raise NoConvergenceError(max_iters, residual)
            v = self._advance(W, v)
            residual = left_residual(W, v)
            iterations += 1

        for _ in range(self._config.polish_iters):
            candidate = self._advance(W, v)
            candidate_residual = left_residual(W, candidate)
            if candidate_residual >= residual:
                break
            v, residual = candidate, candidate_residual
            iterations += 1

        v, residual = self._refine(W, v, residual)
        logger.debug(f"Power iteration converged: n={W.n}, iterations={iterations}, residual={residual:.3e}")
        return PerronVector(values=v / math.fsum(v), residual=residual, iterations=iterations, solver=self.get_name())
