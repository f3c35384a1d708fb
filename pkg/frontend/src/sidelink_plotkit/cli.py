"""Command-line entry point: `sidelink-plotkit render --csv FILE --out FILE.png`."""
from __future__ import annotations

import argparse
import sys

from .render import CsvFormatError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sidelink-plotkit",
                                     description="plot sidelink-sim result CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render one CSV to an image")
    rend.add_argument("--csv", required=True, help="input results CSV")
    rend.add_argument("--out", required=True, help="output image path (e.g. fig.png)")
    rend.add_argument("--logy", action="store_true", help="logarithmic y axis")
    rend.add_argument("--group", default="scheme,modulation,devices",
                      help="comma-separated columns to group curves by")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        n = render(args.csv, args.out, logy=args.logy,
                   group_by=[c.strip() for c in args.group.split(",") if c.strip()])
        print(f"wrote {args.out} ({n} curves)")
        return 0
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
