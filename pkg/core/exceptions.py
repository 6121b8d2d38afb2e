"""Domain exceptions for herdlab.

Every error the library raises on purpose derives from HerdlabError, so the CLI
can tell a bad input (exit 2) apart from a bug. Model dataclasses raise these
from `__post_init__`; services raise them when a precondition fails.
"""


class HerdlabError(Exception):
    """Root of every deliberate herdlab failure."""


class WeightMatrixError(HerdlabError, ValueError):
    """A raw matrix could not be accepted as a row-stochastic trust matrix."""


class NonSquareMatrixError(WeightMatrixError):
    """The raw matrix is empty, ragged, or not n x n."""


class NegativeEntryError(WeightMatrixError):
    """Entry (i, j) is negative (or not a finite number)."""

    def __init__(self, i: int, j: int, value: float):
        self.i = i
        self.j = j
        self.value = value
        super().__init__(f"weight ({i}, {j}) = {value!r} is not a nonnegative finite number")


class RowSumViolationError(WeightMatrixError):
    """Row i does not sum to 1 within the absolute tolerance."""

    def __init__(self, i: int, actual_sum: float):
        self.i = i
        self.actual_sum = actual_sum
        super().__init__(f"row {i} sums to {actual_sum!r}, expected 1")


class ReducibleMatrixError(HerdlabError):
    """An operation that needs a strongly connected network got a reducible one."""


class NoConvergenceError(HerdlabError):
    """An iterative solver hit its iteration cap before meeting its tolerance.

    For the stationary-vector solvers this points at a periodic or badly
    conditioned chain; retry with damping or the linear solver.
    """

    def __init__(self, max_iters: int, residual: float):
        self.max_iters = max_iters
        self.residual = residual
        super().__init__(f"no convergence after {max_iters} iterations (residual {residual:.3e})")


class DimensionMismatchError(HerdlabError, ValueError):
    """Vectors and matrices passed together disagree on the agent count."""


class InvalidDeltaError(HerdlabError, ValueError):
    """A corner radius outside the open interval (0, 1/2)."""


class InvalidArgumentError(HerdlabError, ValueError):
    """A numeric argument outside its documented domain."""


class TrajectoryTooShortError(HerdlabError):
    """The trajectory holds fewer states than the verdict window needs."""


class MissingActionsError(HerdlabError):
    """Action samples were needed but the run did not record them."""


class UndecidedRunsError(HerdlabError):
    """A report that needs every run decided found undecided ones."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"{count} run(s) are undecided; extend t_max or relax delta/window")


class InputFormatError(HerdlabError):
    """A text input (weights file, scenario, CSV) could not be parsed.

    `line` is the 1-based line the problem was found on, or None when the
    problem is about the document as a whole (e.g. a missing key).
    """

    def __init__(self, message: str, line: "int | None" = None, source: str = "<input>"):
        self.line = line
        self.source = source
        self.detail = message
        location = f"{source}:{line}" if line is not None else source
        super().__init__(f"{location}: {message}")


class ScenarioError(InputFormatError):
    """A scenario file could not be parsed or validated."""

    def __init__(self, message: str, line: "int | None" = None, source: str = "<scenario>"):
        super().__init__(message, line, source)


class SeedSearchError(HerdlabError):
    """No seed in the scanned range produced the requested outcome."""

    def __init__(self, outcome: str, first_seed: int, attempts: int):
        self.outcome = outcome
        self.first_seed = first_seed
        self.attempts = attempts
        super().__init__(f"no seed in {first_seed}..{first_seed + attempts - 1} produced {outcome}")
