"""Figure-rendering CLI over pqcdse export bundles."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcdse-figures",
        description="Render publication-style figures from evaluation exports.",
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument(
        "--bundle", required=True,
        help="directory with results.csv, fronts.json and friends",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--top-k", type=int, default=5,
                        help="bars in the redundancy chart")
    parser.add_argument("--cmap", default="viridis")
    # individual input overrides (defaults come from the bundle layout)
    parser.add_argument("--results", default=None)
    parser.add_argument("--fronts", default=None)
    parser.add_argument("--redundancy", default=None)
    parser.add_argument("--kde", default=None)
    parser.add_argument("--surfaces", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec.from_bundle(
        args.kind, Path(args.bundle), Path(args.out),
        dpi=args.dpi, top_k=args.top_k, cmap=args.cmap,
    )
    for name in ("results", "fronts", "redundancy", "kde", "surfaces"):
        override = getattr(args, name)
        if override:
            setattr(spec, name, Path(override))
    try:
        render(spec)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
