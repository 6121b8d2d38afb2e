"""Abstract interface for ensemble executors."""

from abc import ABC, abstractmethod
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class IEnsembleExecutor(ABC):
    """Protocol for running independent batches of Monte Carlo runs.

    Implementations may run work items in any order and on any thread, but
    must return results in the order of `items`. Each item owns its random
    streams, so scheduling never changes what a batch computes.
    """

    @abstractmethod
    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Apply `fn` to every item and return the results in item order."""
        pass

    @abstractmethod
    def get_workers(self) -> int:
        """Return the number of workers this executor uses."""
        pass
