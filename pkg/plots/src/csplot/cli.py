"""`plot` command: figures from experiment CSV files, no display needed."""

from __future__ import annotations

import argparse
import sys

from .render import MissingColumnError, NoDataError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plot",
                                 description="render curves from sweep CSV files")
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    help="input CSV (repeatable)")
    ap.add_argument("--x", required=True, help="x-axis column")
    ap.add_argument("--y", dest="ys", action="append", required=True,
                    help="y-axis column (repeatable)")
    ap.add_argument("--group", dest="groups", action="append", default=[],
                    help="group-by column, one curve per value (repeatable)")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--title")
    ap.add_argument("--dpi", type=int, default=120)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(tuple(args.inputs), args.x, tuple(args.ys),
                    tuple(args.groups), args.out, args.title, args.dpi)
    try:
        render(spec)
    except MissingColumnError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 2
    except NoDataError as e:
        print(f"error: no data: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
