"""figures <figure_id> --in CSV[,CSV...] --out PATH [--raster]"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="figures",
        description="Render two-panel figures from dpr-bounds sweep CSVs")
    p.add_argument("figure_id", choices=FIGURE_IDS)
    p.add_argument("--in", dest="inputs", required=True,
                   help="comma-separated CSV paths")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--raster", action="store_true",
                   help="write PNG instead of the default vector format")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(figure_id=args.figure_id,
                      inputs=tuple(s for s in args.inputs.split(",") if s),
                      output=args.out, raster=args.raster)
    try:
        info = render(spec)
    except (ValueError, OSError) as exc:
        print(f"figures: error: {exc}", file=sys.stderr)
        return 1
    counts = ", ".join(f"{name}: {panel.series}"
                       for name, panel in info.panels.items())
    print(f"{info.figure_id} -> {info.output} (series per panel: {counts})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
