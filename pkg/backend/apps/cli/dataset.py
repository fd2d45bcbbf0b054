"""Delimited-text forecast archives.

Two layouts are accepted, both with a header row:

* ``members``: ``time, obs, member_1, ..., member_M`` with M >= 2
* ``meanvar``: ``time, obs, mean, var``

``time`` holds strictly increasing integers or ISO-8601 dates; dates are
replaced by their row position. Leading ``#`` lines are a config echo and
are skipped.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from apps.core.exceptions import DatasetError
from apps.core.files import write_frame
from apps.mos.training import TrainingSet

MEMBERS = "members"
MEANVAR = "meanvar"
FORMATS = (MEMBERS, MEANVAR)

INTEGER = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class Table:
    """Parsed columns of a dataset file; ``y`` is NaN where obs is blank."""

    times: tuple[str, ...]
    t: np.ndarray
    m: np.ndarray
    v: np.ndarray
    y: np.ndarray
    dated: bool
    lines: tuple[int, ...]


@dataclass(frozen=True)
class Dataset:
    training: TrainingSet
    times: tuple[str, ...]
    dated: bool = False


def _leading_comments(path: Path) -> int:
    count = 0
    with path.open() as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            count += 1
    return count


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return math.nan


def _numbers(frame: pd.DataFrame, column: str, lines, allow_blank: bool = False) -> np.ndarray:
    raw = frame[column].str.strip()
    values = np.array([_to_float(value) for value in raw], dtype=float)
    bad = ~np.isfinite(values)
    if allow_blank:
        bad &= (raw != "").to_numpy()
    if bad.any():
        row = int(np.argmax(bad))
        raise DatasetError(f"{column} value {raw.iloc[row]!r} is not a finite number", lines[row])
    return values


def _times(frame: pd.DataFrame, lines) -> tuple[np.ndarray, bool]:
    raw = frame["time"].str.strip()
    if raw.map(lambda value: bool(INTEGER.match(value))).all():
        t = raw.astype(np.int64).to_numpy()
        order = t
        dated = False
    else:
        parsed = pd.to_datetime(raw, format="ISO8601", errors="coerce")
        if parsed.isna().any():
            row = int(np.argmax(parsed.isna().to_numpy()))
            raise DatasetError(
                f"time {raw.iloc[row]!r} is neither an integer nor an ISO-8601 date", lines[row]
            )
        order = parsed.to_numpy(dtype="datetime64[ns]").astype(np.int64)
        t = np.arange(len(raw), dtype=np.int64)
        dated = True
    steps = np.diff(order) <= 0
    if steps.any():
        row = int(np.argmax(steps)) + 1
        raise DatasetError(f"time {raw.iloc[row]!r} is not after the previous row", lines[row])
    return t, dated


def read_table(path: Path | str, fmt: str | None = None, require_obs: bool = True) -> Table:
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"dataset file {path} does not exist")
    if fmt is not None and fmt not in FORMATS:
        raise DatasetError(f"unknown dataset format {fmt!r}; expected members or meanvar")
    skip = _leading_comments(path)
    try:
        frame = pd.read_csv(
            path,
            skiprows=skip,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise DatasetError(f"dataset file {path} has no header row") from None
    except pd.errors.ParserError as exc:
        raise DatasetError(f"cannot parse {path}: {exc}") from None

    header = skip + 1
    frame.columns = [str(column).strip().lower() for column in frame.columns]
    columns = list(frame.columns)
    lines = tuple(header + 1 + row for row in range(len(frame)))
    if frame.empty:
        raise DatasetError("dataset has no data rows", header)
    if "time" not in columns:
        raise DatasetError("missing 'time' column", header)
    if "obs" not in columns and require_obs:
        raise DatasetError("missing 'obs' column", header)

    members = [column for column in columns if column.startswith("member")]
    if fmt is None:
        fmt = MEANVAR if {"mean", "var"} <= set(columns) else MEMBERS
    if fmt == MEANVAR:
        missing = {"mean", "var"} - set(columns)
        if missing:
            raise DatasetError(f"meanvar format needs columns {', '.join(sorted(missing))}", header)
        m = _numbers(frame, "mean", lines)
        v = _numbers(frame, "var", lines)
        if np.any(v < 0.0):
            row = int(np.argmax(v < 0.0))
            raise DatasetError(f"var {float(v[row])} is negative", lines[row])
    else:
        if len(members) < 2:
            raise DatasetError(
                f"members format needs at least 2 member columns, found {len(members)}", header
            )
        ensemble = np.column_stack([_numbers(frame, column, lines) for column in members])
        m = ensemble.mean(axis=1)
        v = ensemble.var(axis=1, ddof=1)

    if "obs" in columns:
        y = _numbers(frame, "obs", lines, allow_blank=not require_obs)
    else:
        y = np.full(len(frame), np.nan)
    t, dated = _times(frame, lines)
    times = tuple(frame["time"].str.strip())
    return Table(times, t, m, v, y, dated, lines)


def ingest(path: Path | str, fmt: str | None = None) -> Dataset:
    """Read a training archive; every row needs an observation."""
    table = read_table(path, fmt)
    return Dataset(TrainingSet(table.m, table.v, table.y, table.t), table.times, table.dated)


def emit(path: Path | str, dataset: Dataset, echo: dict[str, object]) -> Path:
    """Write ``dataset`` in meanvar layout below a config echo."""
    train = dataset.training
    frame = pd.DataFrame(
        {"time": list(dataset.times), "obs": train.y, "mean": train.m, "var": train.v}
    )
    return write_frame(path, echo, frame)
