"""Command line: render one figure family from result tables."""

from __future__ import annotations

import argparse
import sys

from .families import FAMILIES, FigureSpec, render
from .tables import TableError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from sweep result tables."
    )
    parser.add_argument(
        "--table", required=True, nargs="+", help="results.csv file(s) to read"
    )
    parser.add_argument("--family", required=True, choices=sorted(FAMILIES))
    parser.add_argument("--out", required=True, help="output image path (png/pdf/svg)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = render(FigureSpec(family=args.family, table_paths=args.table, out_path=args.out))
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    drawn = sum(len(v) for v in report.series.values())
    print(f"wrote {args.out} ({drawn} series across {len(report.series)} axes)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
