"""Command line: ``plotkit thresholds ...`` and ``plotkit biasmap ...``."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .figures import plot_bias_mapping, plot_thresholds
from .io import SchemaError

EXIT_OK = 0
EXIT_SCHEMA = 3


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plotkit")
    ap.add_argument("--version", action="version", version=f"plotkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    th = sub.add_parser("thresholds", help="P_f vs p per distance from a scan CSV")
    th.add_argument("--csv", required=True, help="scan CSV path")
    th.add_argument("--fit", default=None, help="threshold-fit JSON path (optional)")
    th.add_argument("--out", required=True, help="output figure (SVG or PNG)")

    bm = sub.add_parser("biasmap", help="conditional-prior curves from a grid JSON")
    bm.add_argument("--grid", required=True, help="bias-map-grid JSON path")
    bm.add_argument("--out", required=True, help="output figure (SVG or PNG)")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "thresholds":
            plot_thresholds(args.csv, args.fit, args.out)
        else:
            plot_bias_mapping(args.grid, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
