"""Estimate and scan-result containers with stable CSV/JSON output.

CSV schema (frozen; the plotting scripts parse it byte-exactly):
    columns p, q_or_T, mean, stderr, n_disorder, sweeps, seed
    '.' decimal separator, '\\n' newlines, shortest round-trip floats.
Failed cells carry mean = stderr = nan. The full run configuration is
embedded in JSON output and written as a ``<path>.config.json`` sidecar
next to CSV output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

CSV_COLUMNS = ("p", "q_or_T", "mean", "stderr", "n_disorder", "sweeps", "seed")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    autocorrelation_hint: float = math.nan

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not (self.std_error >= 0 or math.isnan(self.std_error)):
            raise ValueError("std_error must be >= 0")


@dataclass(frozen=True)
class ScanCell:
    p: float
    y: float  # q or T, per the scan's y-axis label
    mean: float
    stderr: float
    n_disorder: int
    sweeps: int
    seed: int
    ok: bool = True


@dataclass
class ScanResult:
    """Rectangular (p, y) grid of order-parameter estimates."""

    p_values: tuple[float, ...]
    y_values: tuple[float, ...]
    y_axis: str  # "q" or "T"
    cells: list[ScanCell] = field(default_factory=list)

    def add(self, cell: ScanCell) -> None:
        self.cells.append(cell)

    def cell(self, p: float, y: float) -> Optional[ScanCell]:
        for c in self.cells:
            if c.p == p and c.y == y:
                return c
        return None

    def grid_means(self) -> list[list[float]]:
        """means[i][j] for p_values[i], y_values[j]; nan where failed."""
        out = [[math.nan] * len(self.y_values) for _ in self.p_values]
        for c in self.cells:
            i = self.p_values.index(c.p)
            j = self.y_values.index(c.y)
            out[i][j] = c.mean if c.ok else math.nan
        return out

    def to_csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for c in self.cells:
            lines.append(
                f"{c.p!r},{c.y!r},{c.mean!r},{c.stderr!r},{c.n_disorder},{c.sweeps},{c.seed}"
            )
        return "\n".join(lines) + "\n"

    def to_json_doc(self, config: Optional[dict] = None) -> dict:
        return {
            "config": config,
            "axes": {"p": list(self.p_values), self.y_axis: list(self.y_values)},
            "y_axis": self.y_axis,
            "cells": [
                {
                    "p": c.p,
                    "q_or_T": c.y,
                    "mean": c.mean,
                    "stderr": c.stderr,
                    "n_disorder": c.n_disorder,
                    "sweeps": c.sweeps,
                    "seed": c.seed,
                    "ok": c.ok,
                }
                for c in self.cells
            ],
        }

    def write(self, path: str | Path, fmt: str, config: Optional[dict] = None) -> None:
        path = Path(path)
        if fmt == "csv":
            path.write_text(self.to_csv_text())
            if config is not None:
                sidecar = path.with_name(path.name + ".config.json")
                sidecar.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")
        elif fmt == "json":
            path.write_text(json.dumps(self.to_json_doc(config), indent=2, sort_keys=True) + "\n")
        else:
            raise ValueError(f"unknown output format {fmt!r}")


def combine_disorder_estimates(estimates: list[McEstimate]) -> McEstimate:
    """Quenched average: between-sample variance plus mean within-sample
    error, both divided by the sample count."""
    n = len(estimates)
    means = [e.mean for e in estimates]
    mean = sum(means) / n
    if n > 1:
        var_between = sum((m - mean) ** 2 for m in means) / (n - 1)
    else:
        var_between = 0.0
    within = [e.std_error**2 for e in estimates if not math.isnan(e.std_error)]
    mean_within = sum(within) / len(within) if within else 0.0
    se = math.sqrt(var_between / n + mean_within / n)
    return McEstimate(mean=mean, std_error=se, n_samples=n)
