"""render: turn spinbilliards CSV outputs into static images."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PANEL_KINDS, FigureSpec, InputError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render spinbilliards CSV outputs as heatmap/histogram panels",
    )
    parser.add_argument("--kind", required=True, choices=PANEL_KINDS)
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        nargs="+",
        type=Path,
        help="input CSV file(s); cgf_acf takes cgf.csv then acf.csv",
    )
    parser.add_argument("--out", required=True, type=Path, help="output image path")
    parser.add_argument("--scale", default="log", choices=("log", "linear"),
                        help="color scale for momentum magnitudes")
    parser.add_argument("--dpi", default=150, type=int)
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            scale=args.scale,
            dpi=args.dpi,
        )
        render(spec)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
