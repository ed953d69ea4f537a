"""Render fidelity-grid CSVs from the gate simulator as figures.

A pure consumer of the CSV artifact format: heatmap panels laid out
three per row, single-panel rendering, and one-dimensional cuts at the
other axis's zero crossing. Nothing is recomputed; annotations echo the
file metadata verbatim.
"""

from .gridio import GridData, GridFormatError, read_grid
from .render import (
    CutSeries,
    PanelSpec,
    build_cut_figure,
    build_figure,
    caption_text,
    color_range,
    cut_series,
    panel_grid_shape,
    panel_title,
    render_cut,
    render_figure,
    render_panel,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GridData", "GridFormatError", "read_grid",
    "PanelSpec", "CutSeries", "panel_grid_shape", "panel_title",
    "color_range", "caption_text", "cut_series",
    "render_panel", "build_figure", "render_figure",
    "build_cut_figure", "render_cut",
]
