"""CSV output with `#`-prefixed metadata header lines.

Every file starts with lines `# key: value` (version, config digest, seed, and
whatever else the writer adds), then a plain CSV table. Floats are written
with 17 significant digits and read back with pandas' round-trip parser, so
re-reading a file reproduces the in-memory values exactly.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from core import __version__
from core.exceptions import InputFormatError
from core.models.simulation import Trajectory

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def standard_metadata(config_digest: str = "", seed: Optional[int] = None, **extra: object) -> Dict[str, str]:
    """Header fields every output carries; nothing host- or time-dependent."""
    meta = {"herdlab_version": __version__}
    if config_digest:
        meta["config_digest"] = config_digest
    if seed is not None:
        meta["seed"] = str(seed)
    meta.update({key: str(value) for key, value in extra.items()})
    return meta


def format_table(frame: pd.DataFrame, metadata: Optional[Dict[str, str]] = None) -> str:
    """The file text: metadata header lines, then the CSV body."""
    header = "".join(f"# {key}: {value}\n" for key, value in (metadata or {}).items())
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return header + body


def write_table(frame: pd.DataFrame, path: Union[str, Path], metadata: Optional[Dict[str, str]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_table(frame, metadata), encoding="utf-8")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def read_table(path: Union[str, Path]) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """(table, metadata) from a file written by write_table."""
    path = Path(path)
    metadata: Dict[str, str] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(":")
            metadata[key.strip()] = value.strip()
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    return frame, metadata


def write_trajectory_csv(
    trajectory: Trajectory, path: Union[str, Path], metadata: Optional[Dict[str, str]] = None
) -> Path:
    """`t,x1,...,xN`, one row per stored step."""
    meta = dict(metadata or standard_metadata(trajectory.config_digest))
    return write_table(trajectory.to_frame(), path, meta)


def read_trajectory_csv(path: Union[str, Path]) -> Trajectory:
    """Trajectory (times and states only) from a `t,x1,...,xN` file."""
    frame, _ = read_table(path)
    if frame.columns.empty or frame.columns[0] != "t":
        raise InputFormatError("expected a `t` column first", None, str(path))
    states = frame.drop(columns="t").to_numpy(dtype=np.float64)
    return Trajectory(times=frame["t"].to_numpy(dtype=np.int64), states=states)
