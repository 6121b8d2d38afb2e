"""Application configuration management."""

from dataclasses import dataclass, field
from typing import List
import os

# Registry keys accepted for HERDLAB_SOLVER / HERDLAB_EXECUTOR. The classes
# behind them are wired in dependency_injection/container.py; keep both lists in
# step when adding a backend.
SOLVER_NAMES: List[str] = ["power", "linear"]
EXECUTOR_NAMES: List[str] = ["threads", "serial"]


@dataclass
class SpectralConfig:
    """Stationary (Perron) vector solver configuration.

    `solver` picks the backend: "power" (damped power iteration on W^T) or
    "linear" (exact solve of pi^T (W - I) = 0 with sum(pi) = 1). Both are held
    to the same residual contract, so the choice only trades speed for
    robustness. `damping` is the weight kept on the previous iterate:
    v <- damping * v + (1 - damping) * W^T v. Any value in (0, 1) leaves the
    fixed point unchanged and makes periodic chains (the 2-agent swap) converge.
    `polish_iters` bounds the extra iterations run after `tol` is met while the
    residual still drops; `refine_steps` bounds the bordered-solve corrections
    that follow and take the residual to round-off.
    """
    solver: str = "power"
    tol: float = 1e-12
    max_iters: int = 100_000
    damping: float = 0.5
    polish_iters: int = 200
    refine_steps: int = 3


@dataclass
class AnalysisSettings:
    """Defaults for the corner radius and verdict persistence window.

    Almost-sure convergence gives no finite-time test. A run counts as
    settled in a corner when it stays there for `window` consecutive final
    steps. Both knobs are overridable per command.
    """
    delta: float = 0.05
    window: int = 50


@dataclass
class EnsembleConfig:
    """Monte Carlo execution configuration.

    `threads` = 0 means one worker per CPU. `batch_size` is how many runs are
    advanced together as one vectorised block. Neither changes results: every
    run owns its random stream and results are merged by run index.
    """
    executor: str = "threads"
    threads: int = 0
    batch_size: int = 512


@dataclass
class StorageConfig:
    """Trajectory storage limits.

    Up to `full_history_steps` states a trajectory keeps every step. Longer
    horizons keep strided snapshots plus the last `tail_steps` steps densely,
    which is all the verdict logic looks at.
    """
    full_history_steps: int = 100_000
    tail_steps: int = 1_000


@dataclass
class OutputConfig:
    """Where CLI commands write their CSV/JSON files."""
    output_dir: str = "out"


@dataclass
class AppConfig:
    """Application-wide configuration."""
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    storage: StorageConfig = field(default_factory=StorageConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Load and validate configuration from HERDLAB_* environment variables.

        Every variable is optional; unset ones keep the dataclass defaults.

        Raises:
            ValueError: If a solver/executor name is not registered, or a
                numeric variable does not parse.
        """
        solver = os.getenv("HERDLAB_SOLVER", "power").lower()
        if solver not in SOLVER_NAMES:
            raise ValueError(
                f"Unknown HERDLAB_SOLVER '{solver}'. Supported solvers: {SOLVER_NAMES}"
            )
        executor = os.getenv("HERDLAB_EXECUTOR", "threads").lower()
        if executor not in EXECUTOR_NAMES:
            raise ValueError(
                f"Unknown HERDLAB_EXECUTOR '{executor}'. Supported executors: {EXECUTOR_NAMES}"
            )

        threads = _int_env("HERDLAB_THREADS", 0)
        if threads < 0:
            raise ValueError("HERDLAB_THREADS must be >= 0 (0 = auto)")

        return cls(
            spectral=SpectralConfig(
                solver=solver,
                tol=_float_env("HERDLAB_SPECTRAL_TOL", 1e-12),
                max_iters=_int_env("HERDLAB_SPECTRAL_MAX_ITERS", 100_000),
            ),
            analysis=AnalysisSettings(
                delta=_float_env("HERDLAB_DELTA", 0.05),
                window=_int_env("HERDLAB_WINDOW", 50),
            ),
            ensemble=EnsembleConfig(
                executor=executor,
                threads=threads,
                batch_size=_int_env("HERDLAB_BATCH_SIZE", 512),
            ),
            storage=StorageConfig(
                full_history_steps=_int_env("HERDLAB_FULL_HISTORY_STEPS", 100_000),
                tail_steps=_int_env("HERDLAB_TAIL_STEPS", 1_000),
            ),
            output=OutputConfig(output_dir=os.getenv("HERDLAB_OUTPUT_DIR", "out")),
            log_level=os.getenv("HERDLAB_LOG_LEVEL", "INFO").upper(),
        )


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'") from None


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got '{raw}'") from None
