"""Command-line front end: `wiserx-report render --in DIR --out DIR`.

Exit codes: 0 success (including the empty-directory "no data" case),
1 usage error, 2 schema mismatch or unreadable input.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .render import SchemaMismatch, render_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SCHEMA = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wiserx-report", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wiserx-report {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render figures from experiment CSV files")
    p_render.add_argument("--in", dest="csv_dir", required=True)
    p_render.add_argument("--out", dest="out_dir", required=True)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        figures = render_report(args.csv_dir, args.out_dir)
    except (SchemaMismatch, OSError) as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if figures:
        print(f"rendered {len(figures)} figure(s) in {args.out_dir}")
    else:
        print(f"no experiment data in {args.csv_dir}; wrote empty index in {args.out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
