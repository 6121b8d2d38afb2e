"""Plain-text weight matrix files.

Format: the first non-comment line holds n, followed by n lines of n
whitespace-separated decimal numbers. `#` starts a comment that runs to the end
of the line; blank lines are ignored.
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

from core.exceptions import InputFormatError, WeightMatrixError
from core.models.weight_matrix import WeightMatrix

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """(1-based line number, content) for every non-blank line, comments stripped."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((number, content))
    return lines


def parse_weight_matrix(text: str, source: str = "<weights>") -> WeightMatrix:
    """Parse and validate a weight matrix.

    Raises:
        InputFormatError: malformed text, or a matrix that fails validation;
            the message names the offending line.
    """
    lines = _content_lines(text)
    if not lines:
        raise InputFormatError("empty weights file: expected n on the first line", None, source)
    first_line, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise InputFormatError(f"expected the agent count n, got {header!r}", first_line, source) from None
    if n < 1:
        raise InputFormatError(f"agent count must be positive, got {n}", first_line, source)

    body = lines[1:]
    if len(body) != n:
        line = body[n][0] if len(body) > n else (body[-1][0] if body else first_line)
        raise InputFormatError(f"expected {n} matrix rows, found {len(body)}", line, source)
    rows = []
    for number, content in body:
        fields = content.split()
        if len(fields) != n:
            raise InputFormatError(f"expected {n} numbers, found {len(fields)}", number, source)
        try:
            rows.append([float(v) for v in fields])
        except ValueError as exc:
            raise InputFormatError(f"not a number: {exc}", number, source) from None

    try:
        return WeightMatrix(rows)
    except WeightMatrixError as exc:
        # Row-level problems point at the row's line.
        row = getattr(exc, "i", None)
        line = body[row][0] if row is not None else first_line
        raise InputFormatError(str(exc), line, source) from exc


def load_weight_matrix(path: Union[str, Path]) -> WeightMatrix:
    """Read and validate a weights file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read weights file: {exc.strerror}", None, str(path)) from None
    W = parse_weight_matrix(text, source=str(path))
    logger.info(f"Loaded {W.n} x {W.n} weight matrix from {path}")
    return W


def format_weight_matrix(W: WeightMatrix) -> str:
    """The file text for W, 17 significant digits per entry."""
    rows = [" ".join(f"{v:.17g}" for v in row) for row in W.entries]
    return "\n".join([str(W.n), *rows]) + "\n"


def save_weight_matrix(W: WeightMatrix, path: Union[str, Path]) -> None:
    """Write W in the weights-file format."""
    Path(path).write_text(format_weight_matrix(W), encoding="utf-8")
