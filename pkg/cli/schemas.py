"""Pydantic schema for scenario files.

A scenario names a network and the parameters of one experiment:

    weights = networks/four_component.txt         # path (relative to the scenario) ...
    weights = 0.5 0.5; 0.5 0.5          # ... or inline rows separated by `;`
    alpha = 0.1
    x1 = 0.5                            # scalar broadcast, or one value per agent
    t_max = 5000
    stubborn = 1                        # 1-based agent numbers
"""

from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from core.exceptions import InputFormatError, ScenarioError, WeightMatrixError
from core.implementations.storage.scenario_file import KeyValueDocument, parse_key_values
from core.implementations.storage.weight_matrix_file import load_weight_matrix
from core.models.simulation import MAX_SEED, SimulationConfig
from core.models.weight_matrix import WeightMatrix


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [part for part in value.replace(",", " ").split() if part]
    return value


class ScenarioFile(BaseModel):
    """Validated scenario values. Unset delta and window fall back to HERDLAB_DELTA / HERDLAB_WINDOW."""

    model_config = ConfigDict(extra="forbid")

    weights: str = Field(..., min_length=1)
    alpha: float = Field(0.1, gt=0.0, lt=1.0)
    x1: List[float] = Field(default_factory=lambda: [0.5], min_length=1)
    t_max: int = Field(1000, ge=1)
    runs: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0, le=MAX_SEED)
    delta: Optional[float] = Field(None, gt=0.0, lt=0.5)
    window: Optional[int] = Field(None, ge=1)
    stubborn: List[int] = Field(default_factory=list)
    record_actions: bool = False
    schedule: Literal["constant", "halving"] = "constant"
    beta: float = Field(0.25, ge=0.0, le=0.5)
    steps: int = Field(60, ge=0)
    output_dir: Optional[str] = None

    @field_validator("x1", "stubborn", mode="before")
    @classmethod
    def split_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("x1")
    @classmethod
    def opinions_in_unit_interval(cls, value: List[float]) -> List[float]:
        if any(not 0.0 <= v <= 1.0 for v in value):
            raise ValueError("opinions must lie in [0, 1]")
        return value

    @field_validator("stubborn")
    @classmethod
    def one_based_agents(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError("stubborn agents are numbered from 1")
        return value

    def initial_state(self, n: int) -> List[float]:
        """x1 broadcast to n agents."""
        if len(self.x1) == 1:
            return self.x1 * n
        if len(self.x1) != n:
            raise ValueError(f"x1 has {len(self.x1)} values but the network has {n} agents")
        return list(self.x1)

    def simulation_config(self, W: WeightMatrix, seed: Optional[int] = None) -> SimulationConfig:
        return SimulationConfig(
            W=W,
            alpha=self.alpha,
            x1=self.initial_state(W.n),
            t_max=self.t_max,
            seed=self.seed if seed is None else seed,
            stubborn=frozenset(k - 1 for k in self.stubborn),
            record_actions=self.record_actions,
        )


def _inline_matrix(value: str) -> Optional[List[List[float]]]:
    """Rows of an inline `a b; c d` matrix, or None when value is a path."""
    rows = [row.replace(",", " ").split() for row in value.split(";")]
    try:
        return [[float(v) for v in row] for row in rows if row]
    except ValueError:
        return None


def resolve_weights(value: str, base_dir: Path) -> WeightMatrix:
    """Inline matrix, or a weights file relative to `base_dir`."""
    rows = _inline_matrix(value)
    if rows is not None:
        return WeightMatrix(rows)
    path = Path(value)
    if not path.is_absolute():
        path = base_dir / path
    if not path.exists():
        raise FileNotFoundError(f"weights file {path} does not exist")
    return load_weight_matrix(path)


def _first_error(exc: ValidationError, doc: KeyValueDocument) -> ScenarioError:
    error = exc.errors()[0]
    key = str(error["loc"][0]) if error["loc"] else ""
    line = doc.line_of(key)
    return ScenarioError(f"{key}: {error['msg']}" if key else error["msg"], line, doc.source)


def parse_scenario(text: str, source: str = "<scenario>", base_dir: Union[str, Path] = ".") -> Tuple[ScenarioFile, WeightMatrix]:
    """Parse, validate and resolve a scenario document.

    Raises:
        ScenarioError: any problem, reported with the line it was found on.
    """
    doc = parse_key_values(text, source, allowed=ScenarioFile.model_fields.keys())
    try:
        scenario = ScenarioFile.model_validate(doc.values)
    except ValidationError as exc:
        raise _first_error(exc, doc) from None
    try:
        W = resolve_weights(scenario.weights, Path(base_dir))
        scenario.initial_state(W.n)
        if any(k > W.n for k in scenario.stubborn):
            raise ValueError(f"stubborn agent numbers must lie in 1..{W.n}")
    except (WeightMatrixError, InputFormatError, FileNotFoundError) as exc:
        raise ScenarioError(f"weights: {exc}", doc.line_of("weights"), source) from exc
    except ValueError as exc:
        key = "stubborn" if "stubborn" in str(exc) else "x1"
        raise ScenarioError(f"{key}: {exc}", doc.line_of(key), source) from exc
    return scenario, W


def load_scenario(path: Union[str, Path]) -> Tuple[ScenarioFile, WeightMatrix]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror}", None, str(path)) from None
    return parse_scenario(text, source=str(path), base_dir=path.parent)
