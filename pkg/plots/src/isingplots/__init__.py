"""Figure rendering for the Ising/code simulation toolkit's CSV outputs."""

from isingplots.render import PlotJob, PlotKind, render
from isingplots.schema import SchemaError, read_scan, read_threshold

__all__ = ["PlotJob", "PlotKind", "render", "SchemaError", "read_scan", "read_threshold"]
