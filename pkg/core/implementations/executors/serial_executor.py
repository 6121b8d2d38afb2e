"""In-thread executor."""

from typing import Callable, List, Sequence, TypeVar

from core.interfaces.ensemble_executor import IEnsembleExecutor

T = TypeVar("T")
R = TypeVar("R")


class SerialExecutor(IEnsembleExecutor):
    """Runs every batch in the calling thread, in order."""

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        return [fn(item) for item in items]

    def get_workers(self) -> int:
        return 1
