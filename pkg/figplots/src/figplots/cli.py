"""Command-line front end: render every grid CSV in a directory."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .gridio import GridFormatError
from .render import render_cut, render_figure

EXIT_OK = 0
EXIT_INPUT = 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render fidelity-grid CSVs as heatmap panels or cuts.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render the grids in a directory")
    render.add_argument("--grids", required=True, type=Path,
                        help="directory containing *.csv fidelity grids")
    render.add_argument("--out", required=True, type=Path,
                        help="output image path")
    render.add_argument("--cut", choices=("eta", "epsilon"),
                        help="draw cuts along this axis instead of heatmaps")
    args = parser.parse_args(argv)

    try:
        paths = sorted(args.grids.glob("*.csv"))
        if not paths:
            raise GridFormatError(f"no grid CSVs under {args.grids}")
        if args.cut is None:
            out = render_figure(paths, args.out)
        else:
            out = render_cut(paths, args.out, axis=args.cut)
    except (GridFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(out)
    return EXIT_OK
