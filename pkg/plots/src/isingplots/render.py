"""Figure rendering. Pure visualization: every number shown comes from
the input files; nothing is re-simulated here."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless, deterministic backend
import matplotlib.pyplot as plt
import numpy as np

from isingplots.schema import Table, read_scan, read_threshold, scan_grid


class PlotKind(Enum):
    HEATMAP = "heatmap"  # (p, T) or (p, q) scan as a colored grid
    PHASE_DIAGRAM = "phase-diagram"  # (p, q) heatmap + 0.5 contour + p = q line
    BINDER = "binder"  # cumulant vs p, one curve per linear size
    THRESHOLD = "threshold"  # decoding success vs p with error bars


@dataclass(frozen=True)
class PlotJob:
    inputs: tuple[str, ...]
    kind: PlotKind
    output: str
    title: str | None = None
    x_label: str | None = None
    y_label: str | None = None

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("a plot job needs at least one input file")


def _finish(fig, ax, job: PlotJob, default_x: str, default_y: str) -> str:
    ax.set_xlabel(job.x_label or default_x)
    ax.set_ylabel(job.y_label or default_y)
    if job.title:
        ax.set_title(job.title)
    out = Path(job.output)
    fig.savefig(out, dpi=150, bbox_inches="tight", metadata=_stable_metadata(out))
    plt.close(fig)
    return str(out)


def _stable_metadata(out: Path) -> dict:
    # Strip timestamps so re-rendering the same data gives the same bytes.
    if out.suffix.lower() == ".png":
        return {"Software": "isingplots"}
    if out.suffix.lower() == ".svg":
        return {"Date": None}
    return {}


def _heatmap(ax, table: Table, with_overlays: bool):
    ps, ys, grid = scan_grid(table)
    mesh = ax.pcolormesh(
        ps, ys, np.array(grid), shading="nearest", cmap="viridis", vmin=0.0, vmax=1.0
    )
    if with_overlays:
        lo = max(min(ps), min(ys))
        hi = min(max(ps), max(ys))
        if lo < hi:
            ax.plot([lo, hi], [lo, hi], "w--", lw=1.2, label="p = q")
        ax.contour(ps, ys, np.array(grid), levels=[0.5], colors="red", linewidths=1.2)
        ax.plot([], [], color="red", lw=1.2, label="order parameter = 0.5")
        ax.legend(loc="upper right", fontsize=8)
    return mesh


def render(job: PlotJob) -> str:
    """Render one figure; returns the written path."""
    if job.kind in (PlotKind.HEATMAP, PlotKind.PHASE_DIAGRAM):
        table = read_scan(job.inputs[0])
        fig, ax = plt.subplots(figsize=(5.2, 4.2))
        mesh = _heatmap(ax, table, with_overlays=job.kind is PlotKind.PHASE_DIAGRAM)
        fig.colorbar(mesh, ax=ax, label="order parameter")
        y_name = "q" if job.kind is PlotKind.PHASE_DIAGRAM else "T"
        return _finish(fig, ax, job, "p", y_name)

    if job.kind is PlotKind.BINDER:
        table = read_scan(job.inputs[0])
        fig, ax = plt.subplots(figsize=(5.2, 4.2))
        sizes = sorted(set(table.column("q_or_T")))
        for size in sizes:
            rows = [
                (p, m, e)
                for p, y, m, e in zip(
                    table.column("p"), table.column("q_or_T"),
                    table.column("mean"), table.column("stderr"),
                )
                if y == size
            ]
            rows.sort()
            ax.errorbar(
                [r[0] for r in rows], [r[1] for r in rows], yerr=[r[2] for r in rows],
                marker="o", ms=3, capsize=2, label=f"L = {size:g}",
            )
        ax.legend()
        return _finish(fig, ax, job, "p", "Binder cumulant U")

    if job.kind is PlotKind.THRESHOLD:
        fig, ax = plt.subplots(figsize=(5.2, 4.2))
        for path in job.inputs:
            table = read_threshold(path)
            size = table.column("L")[0]
            ax.errorbar(
                table.column("p"), table.column("success_mean"),
                yerr=table.column("success_stderr"),
                marker="o", ms=3, capsize=2, label=f"L = {size:g}",
            )
        ax.legend()
        return _finish(fig, ax, job, "p", "decoding success probability")

    raise ValueError(f"unknown plot kind {job.kind!r}")  # pragma: no cover
