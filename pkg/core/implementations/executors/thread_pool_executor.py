"""Thread-pool executor for ensemble batches."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from config.settings import EnsembleConfig
from core.interfaces.ensemble_executor import IEnsembleExecutor

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(requested: int) -> int:
    """0 means one worker per CPU."""
    if requested < 0:
        raise ValueError(f"thread count must be >= 0, got {requested}")
    return requested or (os.cpu_count() or 1)


class ThreadPoolEnsembleExecutor(IEnsembleExecutor):
    """Runs batches on a ThreadPoolExecutor.

    numpy releases the GIL inside the vectorised update, so batches overlap.
    `Executor.map` yields results in submission order whatever order the
    workers finish in.
    """

    def __init__(self, config: EnsembleConfig):
        self._workers = resolve_threads(config.threads)

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        if self._workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        logger.debug(f"Dispatching {len(items)} batches to {self._workers} threads")
        with ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="herdlab") as pool:
            return list(pool.map(fn, items))

    def get_workers(self) -> int:
        return self._workers
