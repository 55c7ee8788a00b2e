"""figures <fig-id> --in <files> --out <image>"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render posmogram CLI data files as figures")
    parser.add_argument("figure_id", choices=FIGURE_IDS,
                        help="fig1/fig3: density + oscillator overlay; fig2: mode family")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input data file(s) in the posmogram CLI schema")
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        path = render(FigureSpec(args.figure_id, tuple(args.inputs), args.out))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
