"""Observed samples v_1..v_N and CSV ingestion."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

DEMO_SEED = 19971023
DEMO_LENGTH = 600
DEMO_FILE = "demo_series.csv"


class SeriesParseError(ValueError):
    def __init__(self, source: str, row: int, cell: str):
        self.row = row
        self.cell = cell
        super().__init__(f"{source}: row {row}: non-numeric value {cell!r}")


@dataclass(frozen=True)
class Series:
    values: np.ndarray
    source: str = "<memory>"

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.source}: series contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def sample(self, n: int) -> np.ndarray:
        """First n observations."""
        if n > len(self):
            raise ValueError(f"{self.source}: {len(self)} values, need at least n={n}")
        return self.values[:n]


def _as_float(cell: str) -> float | None:
    try:
        x = float(cell)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def ingest(path, column: str | int = 0) -> Series:
    """Read one numeric column of a comma-delimited file.

    ``column`` is a header name or a 0-based index (an all-digit string counts
    as an index). The first row is treated as a header when a name is given
    or when its selected cell is not numeric. Blank lines are skipped; error
    messages use 1-based line numbers of the file.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    # blank lines carry no data; a row of empty cells does and is an error
    numbered = [(k, row) for k, row in enumerate(rows, start=1) if len(row) > 1 or (row and row[0].strip())]
    if not numbered:
        raise ValueError(f"{path}: no data")
    first = numbered[0][1]

    if isinstance(column, str) and column.strip().isdigit():
        column = int(column)
    if isinstance(column, str):
        header = [c.strip() for c in first]
        if column not in header:
            raise KeyError(f"{path}: no column named {column!r} in header {header}")
        idx, start = header.index(column), 1
    else:
        idx = column
        start = 1 if len(first) > idx and _as_float(first[idx]) is None else 0

    values = []
    for lineno, row in numbered[start:]:
        cell = row[idx].strip() if idx < len(row) else ""
        x = _as_float(cell)
        if x is None:
            raise SeriesParseError(str(path), lineno, cell)
        values.append(x)
    if not values:
        raise ValueError(f"{path}: header only, no data rows")
    return Series(np.array(values), source=str(path))


def make_demo_series(seed: int = DEMO_SEED, length: int = DEMO_LENGTH) -> np.ndarray:
    """Seeded random walk with AR(1) increments and a slow upward drift.

    Stands in for a long-lived index profile; the values are only meant to
    look plausible, not to reproduce any market.
    """
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(length)
    inc = np.empty(length)
    inc[0] = eps[0]
    for k in range(1, length):
        inc[k] = 0.3 * inc[k - 1] + eps[k]
    return np.round(4000.0 + np.cumsum(25.0 * inc + 5.0), 2)


def demo_series() -> Series:
    """The bundled demo series (600 values, see :func:`make_demo_series`)."""
    ref = resources.files("numgls").joinpath("data", DEMO_FILE)
    with resources.as_file(ref) as p:
        s = ingest(p, "close")
    return Series(s.values, source=f"bundled:{DEMO_FILE} (seed {DEMO_SEED})")


def write_demo_series(path, seed: int = DEMO_SEED, length: int = DEMO_LENGTH) -> None:
    values = make_demo_series(seed, length)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "close"])
        for k, x in enumerate(values, start=1):
            w.writerow([k, f"{x:.2f}"])
