"""Batch figure rendering for subalign CSV output."""

from ._version import __version__
from .render import (
    REGION_COLORS,
    Crossing,
    RenderReport,
    ach_crossings,
    region_rgb,
    render,
)
from .schema import (
    CHERNOFF_HEADER,
    EXPECTATION_HEADER,
    KINDS,
    SWEEP_HEADER,
    ChernoffRow,
    EmptyDataError,
    ExpectationRow,
    PlotJob,
    SchemaError,
    SweepGrid,
    SweepRow,
    load_chernoff,
    load_expectation,
    load_sweep,
    make_grid,
)

__all__ = [
    "__version__",
    "CHERNOFF_HEADER",
    "EXPECTATION_HEADER",
    "KINDS",
    "REGION_COLORS",
    "SWEEP_HEADER",
    "ChernoffRow",
    "Crossing",
    "EmptyDataError",
    "ExpectationRow",
    "PlotJob",
    "RenderReport",
    "SchemaError",
    "SweepGrid",
    "SweepRow",
    "ach_crossings",
    "load_chernoff",
    "load_expectation",
    "load_sweep",
    "make_grid",
    "region_rgb",
    "render",
]
