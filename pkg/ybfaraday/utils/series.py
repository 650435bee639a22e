"""CSV and JSON IO for spectra, traces, trajectories and fit reports.

CSV files are comma-separated with a header row and '.' decimals; floats are
written with ``Settings.csv_float_format``. Every written file may carry a
sidecar ``<file>.meta.json`` echoing the parameters that produced it.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ybfaraday.config import get_settings

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class SeriesIOError(ValueError):
    """Raised when a series file is missing, unreadable or lacks a column."""

    pass


def metadata_path(path: PathLike) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".meta.json")


def write_metadata(path: PathLike, metadata: Dict[str, Any]) -> Path:
    """Write the sidecar metadata for ``path`` and return its location."""
    target = metadata_path(path)
    target.write_text(json.dumps(metadata, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return target


def write_frame(
    frame: pd.DataFrame, path: PathLike, metadata: Optional[Dict[str, Any]] = None
) -> Path:
    """Write ``frame`` as CSV (plus optional sidecar metadata)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        target, index=False, float_format=get_settings().csv_float_format, lineterminator="\n"
    )
    if metadata is not None:
        write_metadata(target, metadata)
    logger.info(f"Wrote {len(frame)} rows to {target}")
    return target


def frame_to_text(frame: pd.DataFrame) -> str:
    """CSV text of ``frame`` for writing to stdout."""
    return frame.to_csv(
        index=False, float_format=get_settings().csv_float_format, lineterminator="\n"
    )


def read_frame(path: PathLike) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SeriesIOError(f"cannot read series file {path}: {e}") from e


def read_series(
    path: PathLike, x_column: str, y_column: str
) -> Tuple[np.ndarray, np.ndarray]:
    """Read two named columns of a CSV file as float arrays."""
    frame = read_frame(path)
    return columns_of(frame, (x_column, y_column), str(path))


def columns_of(
    frame: pd.DataFrame, names: Sequence[str], source: str = "frame"
) -> Tuple[np.ndarray, ...]:
    missing = [n for n in names if n not in frame.columns]
    if missing:
        raise SeriesIOError(
            f"{source} lacks column(s) {missing}; available: {list(frame.columns)}"
        )
    return tuple(frame[n].to_numpy(dtype=float) for n in names)


def write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(payload, indent=2, default=str) + "\n", encoding="utf-8")
    logger.info(f"Wrote {target}")
    return target


def read_json(path: PathLike) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SeriesIOError(f"cannot read JSON file {path}: {e}") from e
