"""Command-line entry: ``figplots <kind> --csv in.csv --out fig.png``."""
from __future__ import annotations

import argparse
import sys
from typing import Optional

import matplotlib.pyplot as plt

from . import correlations, edge_response, heatmap, make_all, purification, scaling, size_scan, stopo
from .io import FigureSpec, SchemaError

RENDERERS = {
    "heatmap": heatmap.render,
    "purification": purification.render,
    "edge-response": edge_response.render,
    "scaling": scaling.render,
    "correlations": correlations.render,
    "stopo": stopo.render,
    "size-scan": size_scan.render,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figplots",
                                     description="Render simulation figures")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in RENDERERS:
        p = sub.add_parser(kind)
        p.add_argument("--csv", required=True, help="input CSV")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--title", default=None)
        p.add_argument("--value", default=None,
                       help="value column (heatmap and size-scan)")
        p.add_argument("--L", default=None, help="chain length to select")
    m = sub.add_parser("make-all")
    m.add_argument("--dir", required=True, help="directory of canonical CSVs")
    m.add_argument("--out-dir", dest="out_dir", required=True)
    m.add_argument("--format", default="png")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "make-all":
            written = make_all.make_all(args.dir, args.out_dir, args.format)
            print("\n".join(written))
            return 0
        options = {k: v for k, v in (("title", args.title), ("value", args.value),
                                     ("L", args.L)) if v is not None}
        spec = FigureSpec(kind=args.command, csv_paths=(args.csv,),
                          out_path=args.out, options=options)
        fig = RENDERERS[args.command](spec)
        plt.close(fig)
        print(args.out)
        return 0
    except (SchemaError, OSError, KeyError, ValueError) as exc:
        print(f"figplots: {exc}", file=sys.stderr)
        return 1


def run_kind(kind: str) -> int:  # pragma: no cover
    return main([kind] + sys.argv[1:])


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
