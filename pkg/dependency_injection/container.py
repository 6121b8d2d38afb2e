"""Dependency Injection Container for wiring dependencies."""

import logging
import threading
from typing import Callable, Dict, Optional

from config.settings import AppConfig, EnsembleConfig, SpectralConfig
from core.implementations.executors.serial_executor import SerialExecutor
from core.implementations.executors.thread_pool_executor import ThreadPoolEnsembleExecutor
from core.implementations.solvers.damped_power_iteration import DampedPowerIteration
from core.implementations.solvers.linear_solve import LinearSolve
from core.interfaces.ensemble_executor import IEnsembleExecutor
from core.interfaces.stationary_solver import IStationarySolver
from core.models.perron_vector import PerronVector
from core.models.weight_matrix import WeightMatrix
from core.services.ensemble_service import EnsembleService
from core.services.reproduction_service import ReproductionService
from core.services.spectral_service import perron_left_vector
from core.services.verification_service import VerificationService


def _build_linear_solve(config: SpectralConfig) -> IStationarySolver:
    # The direct solve has no tuning knobs; tol and max_iters arrive per call.
    return LinearSolve()


def _build_serial_executor(config: EnsembleConfig) -> IEnsembleExecutor:
    return SerialExecutor()


# These registries map a config string (e.g. HERDLAB_SOLVER=linear) to the
# factory that builds it. Names must match SOLVER_NAMES / EXECUTOR_NAMES in
# config/settings.py, which AppConfig.from_env validates against.
SOLVER_REGISTRY: Dict[str, Callable[[SpectralConfig], IStationarySolver]] = {
    "power": DampedPowerIteration,
    "linear": _build_linear_solve,
}

EXECUTOR_REGISTRY: Dict[str, Callable[[EnsembleConfig], IEnsembleExecutor]] = {
    "threads": ThreadPoolEnsembleExecutor,
    "serial": _build_serial_executor,
}

logger = logging.getLogger(__name__)


class ServiceContainer:
    """Dependency Injection Container.

    Every get_* builds its object on first use, caches it and returns the same
    instance afterwards. Getters that need other parts call their getters, so
    the graph builds itself from the leaves up:

        solver, executor --> EnsembleService --> VerificationService
        ReproductionService (no dependencies)
    """

    def __init__(self, config: Optional[AppConfig] = None):
        """Initialize container with configuration.

        Args:
            config: Application configuration. If None, loads from environment.
        """
        self._config = config or AppConfig.from_env()

        # Re-entrant because getters nest (verification -> ensemble -> executor).
        self._lock = threading.RLock()

        self._solver: Optional[IStationarySolver] = None
        self._executor: Optional[IEnsembleExecutor] = None

        self._ensemble_service: Optional[EnsembleService] = None
        self._verification_service: Optional[VerificationService] = None
        self._reproduction_service: Optional[ReproductionService] = None

        logger.info("ServiceContainer initialized")

    @property
    def config(self) -> AppConfig:
        return self._config

    # === Factory Methods for Core Interfaces ===

    def get_solver(self) -> IStationarySolver:
        """Get or create the stationary-vector solver named by HERDLAB_SOLVER.

        Raises:
            ValueError: If the configured solver is not in the registry.
        """
        if not self._solver:
            with self._lock:
                if not self._solver:
                    name = self._config.spectral.solver
                    factory = SOLVER_REGISTRY.get(name)
                    if not factory:
                        raise ValueError(
                            f"Unknown solver: '{name}'. Supported: {list(SOLVER_REGISTRY.keys())}"
                        )
                    logger.info(f"Creating {name} stationary solver")
                    self._solver = factory(self._config.spectral)
        return self._solver

    def get_executor(self) -> IEnsembleExecutor:
        """Get or create the ensemble executor named by HERDLAB_EXECUTOR.

        Raises:
            ValueError: If the configured executor is not in the registry.
        """
        if not self._executor:
            with self._lock:
                if not self._executor:
                    name = self._config.ensemble.executor
                    factory = EXECUTOR_REGISTRY.get(name)
                    if not factory:
                        raise ValueError(
                            f"Unknown executor: '{name}'. Supported: {list(EXECUTOR_REGISTRY.keys())}"
                        )
                    executor = factory(self._config.ensemble)
                    logger.info(f"Creating {name} executor with {executor.get_workers()} worker(s)")
                    self._executor = executor
        return self._executor

    # === Services ===

    def get_ensemble_service(self) -> EnsembleService:
        if not self._ensemble_service:
            with self._lock:
                if not self._ensemble_service:
                    self._ensemble_service = EnsembleService(
                        self.get_executor(), self._config.ensemble, self._config.storage
                    )
        return self._ensemble_service

    def get_verification_service(self) -> VerificationService:
        if not self._verification_service:
            with self._lock:
                if not self._verification_service:
                    self._verification_service = VerificationService(self.get_ensemble_service(), self.get_solver())
        return self._verification_service

    def get_reproduction_service(self) -> ReproductionService:
        if not self._reproduction_service:
            self._reproduction_service = ReproductionService()
        return self._reproduction_service

    def perron_vector(self, W: WeightMatrix) -> PerronVector:
        """pi for W with the configured solver and tolerances."""
        spectral = self._config.spectral
        return perron_left_vector(W, tol=spectral.tol, max_iters=spectral.max_iters, solver=self.get_solver())
