"""Command-line wrapper: render figures from a figdata tree."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotsError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cabletract-plots", description=__doc__)
    parser.add_argument("--figdata", type=Path, required=True, help="directory of F*.csv files")
    parser.add_argument("--out", type=Path, required=True, help="output image directory")
    parser.add_argument("--which", default="all", help="all or one of F1..F21")
    parser.add_argument("--strict", action="store_true", help="fail on missing figdata")
    args = parser.parse_args(argv)
    try:
        written = render(args.figdata, args.out, which=args.which, strict=args.strict)
    except (PlotsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"rendered {len(written)} figure(s) into {args.out}")
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
