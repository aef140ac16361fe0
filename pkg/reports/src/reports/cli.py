"""`render --in DIR --out DIR --format svg`: batch figure generation.

The input directory must hold trace.csv, summary.csv, zcdf.csv and
report.json (the simulator CLI's output schemas). Exit codes: 0 ok,
1 bad arguments or schema mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys

from .figures import FigureSpec, SchemaError, render_all


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render", description=__doc__)
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory with trace.csv, summary.csv, "
                             "zcdf.csv, report.json")
    parser.add_argument("--out", dest="out_dir", required=True)
    parser.add_argument("--format", choices=("png", "svg"), default="svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        trace=os.path.join(args.in_dir, "trace.csv"),
        summary=os.path.join(args.in_dir, "summary.csv"),
        zcdf=os.path.join(args.in_dir, "zcdf.csv"),
        report=os.path.join(args.in_dir, "report.json"),
        out_dir=args.out_dir,
        format=args.format,
    )
    try:
        written = render_all(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
