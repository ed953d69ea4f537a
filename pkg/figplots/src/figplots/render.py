"""Compose heatmap panels and one-dimensional cuts from grid CSVs.

Figures are built with the object-oriented matplotlib API, so no GUI
backend is ever selected and the module is safe to use headless. Numeric
annotations echo the CSV metadata strings verbatim; nothing is
recomputed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from .gridio import GridData, read_grid

DPI = 150


@dataclass(frozen=True)
class PanelSpec:
    """One heatmap: where to read, what to call it, how to color it.

    ``title`` defaults to the grid's own metadata and ``color_range`` to
    [worst fidelity in the grid, 1.0].
    """

    csv_path: Path
    out: Path
    title: str | None = None
    color_range: tuple[float, float] | None = None


def color_range(grid: GridData) -> tuple[float, float]:
    finite = grid.fidelity[np.isfinite(grid.fidelity)]
    lo = float(finite.min()) if finite.size else 0.0
    return (lo, 1.0)


def panel_title(grid: GridData) -> str:
    return f"{grid.path.stem}: {grid.family} {grid.program}, {grid.qubits}q"


def caption_text(grids: Sequence[GridData]) -> str:
    """Echo shared metadata; disagreeing values are joined with '/'."""
    parts = []
    for key in ("gamma", "omega_sm", "timestamp", "config_hash", "tool_version"):
        values: list[str] = []
        for g in grids:
            v = g.meta.get(key, "")
            if v and v not in values:
                values.append(v)
        if values:
            parts.append(f"{key}: {'/'.join(values)}")
    return "   ".join(parts)


def panel_grid_shape(n: int) -> tuple[int, int]:
    """Row-major panel layout with up to three panels per row."""
    if n <= 0:
        raise ValueError("no panels to lay out")
    cols = min(3, n)
    return (math.ceil(n / cols), cols)


def _draw_heatmap(ax, grid: GridData, title: str,
                  vrange: tuple[float, float] | None):
    cmap = mpl.colormaps["viridis"].copy()
    cmap.set_bad("0.85")
    vmin, vmax = vrange if vrange is not None else color_range(grid)
    mesh = ax.pcolormesh(grid.eta, grid.epsilon, grid.fidelity.T,
                         shading="nearest", cmap=cmap, vmin=vmin, vmax=vmax)
    ax.set_xlabel("eta")
    ax.set_ylabel("epsilon")
    ax.set_title(title, fontsize=10)
    return mesh


def _caption(fig: Figure, text: str) -> None:
    # reserve a strip under the panels so constrained layout keeps clear of it
    fig.get_layout_engine().set(rect=(0.0, 0.05, 1.0, 0.95))
    fig.text(0.5, 0.01, text, ha="center", va="bottom", fontsize=7)


def render_panel(spec: PanelSpec) -> Path:
    """Render a single grid as one heatmap image."""
    grid = read_grid(spec.csv_path)
    fig = Figure(figsize=(5.0, 4.2), layout="constrained")
    ax = fig.subplots()
    title = spec.title if spec.title is not None else panel_title(grid)
    mesh = _draw_heatmap(ax, grid, title, spec.color_range)
    fig.colorbar(mesh, ax=ax, label="fidelity")
    _caption(fig, caption_text([grid]) + "\n" + "params: " + grid.meta["params"])
    out = Path(spec.out)
    fig.savefig(out, dpi=DPI)
    return out


def build_figure(csv_paths: Iterable) -> Figure:
    """Lay the grids out as heatmap panels, three per row, in path order."""
    grids = [read_grid(p) for p in csv_paths]
    nrows, ncols = panel_grid_shape(len(grids))
    fig = Figure(figsize=(4.3 * ncols, 3.7 * nrows), layout="constrained")
    axes = fig.subplots(nrows, ncols, squeeze=False).ravel()
    for ax in axes[len(grids):]:
        ax.set_visible(False)
    for ax, grid in zip(axes, grids):
        mesh = _draw_heatmap(ax, grid, panel_title(grid), None)
        fig.colorbar(mesh, ax=ax, label="fidelity")
    _caption(fig, caption_text(grids))
    return fig


def render_figure(csv_paths: Iterable, out) -> Path:
    out = Path(out)
    build_figure(csv_paths).savefig(out, dpi=DPI)
    return out


@dataclass(frozen=True)
class CutSeries:
    """One grid projected onto an axis at the other axis's zero crossing."""

    label: str
    qubits: int
    x: np.ndarray
    y: np.ndarray
    at_string: str


def cut_series(grid: GridData, axis: str = "eta") -> CutSeries:
    """Select the row or column nearest the other axis's zero. Pure indexing."""
    if axis == "eta":
        j = int(np.argmin(np.abs(grid.epsilon)))
        return CutSeries(grid.label, grid.qubits, grid.eta,
                         grid.fidelity[:, j], grid.epsilon_strings[j])
    if axis == "epsilon":
        i = int(np.argmin(np.abs(grid.eta)))
        return CutSeries(grid.label, grid.qubits, grid.epsilon,
                         grid.fidelity[i, :], grid.eta_strings[i])
    raise ValueError(f"axis must be 'eta' or 'epsilon', got {axis!r}")


def build_cut_figure(csv_paths: Iterable, axis: str = "eta") -> Figure:
    """Overlay cuts family by family, one panel per qubit count found."""
    grids = [read_grid(p) for p in csv_paths]
    series = [cut_series(g, axis) for g in grids]
    groups = sorted({s.qubits for s in series})
    other = "epsilon" if axis == "eta" else "eta"
    fig = Figure(figsize=(5.4 * len(groups), 4.2), layout="constrained")
    axes = np.atleast_1d(fig.subplots(1, len(groups)))
    for ax, q in zip(axes, groups):
        members = [(g, s) for g, s in zip(grids, series) if s.qubits == q]
        families = [g.family for g, _ in members]
        distinct = len(set(families)) == len(families)
        cut_values: list[str] = []
        for g, s in members:
            name = g.family if distinct else f"{g.path.stem} {g.family}"
            ax.plot(s.x, s.y, marker="o", markersize=3, linewidth=1.2, label=name)
            if s.at_string not in cut_values:
                cut_values.append(s.at_string)
        ax.set_xlabel(axis)
        ax.set_ylabel("fidelity")
        ax.set_title(f"{q}q, {other} = {'/'.join(cut_values)}", fontsize=10)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
    _caption(fig, caption_text(grids))
    return fig


def render_cut(csv_paths: Iterable, out, axis: str = "eta") -> Path:
    out = Path(out)
    build_cut_figure(csv_paths, axis=axis).savefig(out, dpi=DPI)
    return out
