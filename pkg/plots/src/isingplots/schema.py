"""Strict readers for the delimited outputs of the simulation CLI.

Every reader validates the header and the per-column value types and
raises SchemaError naming the offending column; figures must never be
rendered from data that silently parsed wrong.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

SCAN_COLUMNS = ("p", "q_or_T", "mean", "stderr", "n_disorder", "sweeps", "seed")
THRESHOLD_COLUMNS = (
    "p", "success_mean", "success_stderr", "correct_mean", "correct_stderr", "n_eta", "L"
)
_INT_COLUMNS = {"n_disorder", "sweeps", "seed", "n_eta", "L"}


class SchemaError(ValueError):
    """Input file does not match the documented CSV schema."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class Table:
    """Column-major view of one CSV file."""

    columns: tuple[str, ...]
    data: dict[str, list[float]]

    @property
    def n_rows(self) -> int:
        return len(self.data[self.columns[0]])

    def column(self, name: str) -> list[float]:
        if name not in self.data:
            raise SchemaError(f"missing column {name!r}", column=name)
        return self.data[name]


def _parse(path: str | Path, columns: tuple[str, ...]) -> Table:
    path = Path(path)
    with path.open(newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty file, expected header {','.join(columns)}")
        if tuple(header) != columns:
            missing = [c for c in columns if c not in header]
            extra = [c for c in header if c not in columns]
            offender = (missing or extra or [header[0]])[0]
            raise SchemaError(
                f"{path.name}: header {header} does not match schema {list(columns)}; "
                f"offending column {offender!r}",
                column=offender,
            )
        data: dict[str, list[float]] = {c: [] for c in columns}
        n_rows = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(columns):
                raise SchemaError(
                    f"{path.name}: line {lineno} has {len(row)} fields, expected {len(columns)}"
                )
            for col, tok in zip(columns, row):
                try:
                    val = int(tok) if col in _INT_COLUMNS else float(tok)
                except ValueError:
                    raise SchemaError(
                        f"{path.name}: line {lineno}, column {col!r}: "
                        f"cannot parse {tok!r}",
                        column=col,
                    ) from None
                data[col].append(float(val))
            n_rows += 1
    if n_rows == 0:
        raise SchemaError(f"{path.name}: no data rows under the header")
    return Table(columns, data)


def read_scan(path: str | Path) -> Table:
    """Scan grid: one row per (p, q or T) cell."""
    return _parse(path, SCAN_COLUMNS)


def read_threshold(path: str | Path) -> Table:
    """Threshold curve: one row per p value for one linear size."""
    return _parse(path, THRESHOLD_COLUMNS)


def scan_grid(table: Table) -> tuple[list[float], list[float], list[list[float]]]:
    """(p axis, y axis, means[y][p]) from a scan table; nan for holes."""
    ps = sorted(set(table.column("p")))
    ys = sorted(set(table.column("q_or_T")))
    grid = [[math.nan] * len(ps) for _ in ys]
    for p, y, m in zip(table.column("p"), table.column("q_or_T"), table.column("mean")):
        grid[ys.index(y)][ps.index(p)] = m
    return ps, ys, grid
