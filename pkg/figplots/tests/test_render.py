"""Figure composition and the command line, on synthetic grids."""

from __future__ import annotations

import numpy as np
import pytest

from figplots import (
    PanelSpec,
    build_cut_figure,
    build_figure,
    caption_text,
    color_range,
    cut_series,
    panel_grid_shape,
    read_grid,
    render_cut,
    render_figure,
    render_panel,
)
from figplots.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def data_axes(fig):
    return [ax for ax in fig.axes if ax.get_label() != "<colorbar>"]


def test_color_range_spans_worst_fidelity_to_one(grid_writer):
    grid = read_grid(grid_writer(eta=(0.0, 0.1), epsilon=(0.0, 0.1),
                                 values=[[0.9, 0.4], [0.8, 0.7]]))
    assert color_range(grid) == (0.4, 1.0)


def test_color_range_ignores_nan_cells(grid_writer):
    grid = read_grid(grid_writer(eta=(0.0, 0.1), epsilon=(0.0, 0.1),
                                 values=[[0.9, float("nan")], [0.8, 0.7]]))
    assert color_range(grid) == (0.7, 1.0)


def test_color_range_all_nan_falls_back(grid_writer):
    nan = float("nan")
    grid = read_grid(grid_writer(eta=(0.0,), epsilon=(0.0,), values=[[nan]]))
    assert color_range(grid) == (0.0, 1.0)


def test_panel_grid_shape_rows_of_three():
    assert panel_grid_shape(1) == (1, 1)
    assert panel_grid_shape(2) == (1, 2)
    assert panel_grid_shape(3) == (1, 3)
    assert panel_grid_shape(4) == (2, 3)
    assert panel_grid_shape(6) == (2, 3)
    assert panel_grid_shape(7) == (3, 3)
    with pytest.raises(ValueError):
        panel_grid_shape(0)


def test_render_panel_writes_png(grid_writer, tmp_path):
    out = tmp_path / "panel.png"
    got = render_panel(PanelSpec(csv_path=grid_writer(), out=out))
    assert got == out
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_render_panel_accepts_title_and_range(grid_writer, tmp_path):
    out = tmp_path / "panel.png"
    render_panel(PanelSpec(csv_path=grid_writer(), out=out,
                           title="custom", color_range=(0.0, 1.0)))
    assert out.exists()


def test_build_figure_six_panels_two_by_three(six_panel_dir):
    paths = sorted(six_panel_dir.glob("*.csv"))
    fig = build_figure(paths)
    axes = data_axes(fig)
    gs = axes[0].get_subplotspec().get_gridspec()
    assert (gs.nrows, gs.ncols) == (2, 3)
    assert len(axes) == 6
    assert all(ax.get_visible() for ax in axes)
    # the mesh carries the CSV cells untouched, transposed so eta runs along x
    for ax, path in zip(axes, paths):
        grid = read_grid(path)
        mesh = np.asarray(ax.collections[0].get_array())
        assert np.array_equal(mesh.ravel(), grid.fidelity.T.ravel())
        assert path.stem in ax.get_title()


def test_build_figure_hides_spare_axes(grid_writer, tmp_path):
    paths = [grid_writer(f"g{k}.csv") for k in range(4)]
    fig = build_figure(paths)
    axes = data_axes(fig)
    gs = axes[0].get_subplotspec().get_gridspec()
    assert (gs.nrows, gs.ncols) == (2, 3)
    assert sum(ax.get_visible() for ax in axes) == 4


def test_single_cell_grid_renders_everywhere(grid_writer, tmp_path):
    path = grid_writer("one.csv", eta=(0.0,), epsilon=(0.0,), values=[[0.75]])
    assert render_panel(PanelSpec(csv_path=path, out=tmp_path / "a.png")).exists()
    assert render_figure([path], tmp_path / "b.png").exists()
    assert render_cut([path], tmp_path / "c.png").exists()


def test_cut_series_picks_epsilon_zero_column(grid_writer):
    values = [[0.9, 0.8, 0.7], [0.6, 0.5, 0.4], [0.3, 0.2, 0.1]]
    grid = read_grid(grid_writer(eta=(-0.1, 0.0, 0.1),
                                 epsilon=(-0.1, 0.0, 0.1), values=values))
    s = cut_series(grid, "eta")
    assert np.array_equal(s.x, grid.eta)
    assert np.array_equal(s.y, [0.8, 0.5, 0.2])
    assert s.at_string == "0"


def test_cut_series_epsilon_axis_uses_eta_zero_row(grid_writer):
    values = [[0.9, 0.8, 0.7], [0.6, 0.5, 0.4], [0.3, 0.2, 0.1]]
    grid = read_grid(grid_writer(eta=(-0.1, 0.0, 0.1),
                                 epsilon=(-0.1, 0.0, 0.1), values=values))
    s = cut_series(grid, "epsilon")
    assert np.array_equal(s.y, [0.6, 0.5, 0.4])
    assert s.at_string == "0"


def test_cut_series_nearest_zero_without_exact_crossing(grid_writer):
    grid = read_grid(grid_writer(eta=(0.0, 0.1), epsilon=(0.05, 0.15),
                                 values=[[0.9, 0.8], [0.7, 0.6]]))
    s = cut_series(grid, "eta")
    assert s.at_string == grid.epsilon_strings[0]
    assert np.array_equal(s.y, [0.9, 0.7])


def test_cut_series_rejects_unknown_axis(grid_writer):
    grid = read_grid(grid_writer())
    with pytest.raises(ValueError, match="axis"):
        cut_series(grid, "sigma")


def test_cut_figure_groups_by_qubits_and_overlays_families(six_panel_dir):
    paths = sorted(six_panel_dir.glob("*.csv"))
    fig = build_cut_figure(paths, axis="eta")
    axes = data_axes(fig)
    assert len(axes) == 2
    labels = [t.get_text() for t in axes[0].get_legend().get_texts()]
    assert labels == ["SGQG", "ADIABATIC", "HOLONOMIC"]
    assert len(axes[0].get_lines()) == 3
    # plotted y data is exactly the epsilon = 0 column of each 1q grid
    for line, path in zip(axes[0].get_lines(), paths[:3]):
        grid = read_grid(path)
        assert np.array_equal(line.get_ydata(), cut_series(grid, "eta").y)
    assert "epsilon = 0" in axes[0].get_title()


def test_cut_labels_fall_back_to_stems_on_family_collision(grid_writer):
    paths = [grid_writer("x.csv"), grid_writer("y.csv")]
    fig = build_cut_figure(paths, axis="eta")
    labels = [t.get_text() for t in data_axes(fig)[0].get_legend().get_texts()]
    assert labels == ["x SGQG", "y SGQG"]


def test_caption_echoes_metadata_verbatim(grid_writer):
    grid = read_grid(grid_writer())
    caption = caption_text([grid])
    assert "omega_sm: 25.132741228718345" in caption
    assert "gamma: 1.5707963267948966" in caption
    assert "config_hash: deadbeef" in caption


def test_caption_joins_disagreeing_values(grid_writer):
    g1 = read_grid(grid_writer("a.csv", gamma="1.5707963267948966"))
    g2 = read_grid(grid_writer("b.csv", gamma="0.78539816339744828"))
    caption = caption_text([g1, g2])
    assert "gamma: 1.5707963267948966/0.78539816339744828" in caption


def test_cli_renders_panel_figure(six_panel_dir, tmp_path, capsys):
    out = tmp_path / "fig.png"
    rc = main(["render", "--grids", str(six_panel_dir), "--out", str(out)])
    assert rc == 0
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert str(out) in capsys.readouterr().out


def test_cli_cut_mode(six_panel_dir, tmp_path):
    out = tmp_path / "cut.png"
    assert main(["render", "--grids", str(six_panel_dir),
                 "--out", str(out), "--cut", "eta"]) == 0
    assert out.exists()


def test_cli_rejects_unknown_cut_axis(six_panel_dir, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["render", "--grids", str(six_panel_dir),
              "--out", str(tmp_path / "x.png"), "--cut", "sigma"])
    assert exc.value.code == 2


def test_cli_empty_directory_fails(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    rc = main(["render", "--grids", str(empty), "--out", str(tmp_path / "x.png")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_cli_malformed_csv_fails(grid_writer, tmp_path, capsys):
    path = grid_writer()
    path.write_text(path.read_text().replace("eta,epsilon,fidelity", "bogus"))
    rc = main(["render", "--grids", str(tmp_path), "--out", str(tmp_path / "x.png")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_cli_unwritable_output_fails(six_panel_dir, tmp_path, capsys):
    out = tmp_path / "missing" / "deep" / "fig.png"
    rc = main(["render", "--grids", str(six_panel_dir), "--out", str(out)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_cli_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "figplots" in capsys.readouterr().out
