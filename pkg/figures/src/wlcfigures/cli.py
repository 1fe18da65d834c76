"""Command line for rendering simulator CSVs to images.

    wlcfigures render out.png curve.csv [more.csv ...] [--labels "a,b"]
    wlcfigures all csv_dir out_dir

``all`` renders every *.csv in a directory to a same-named .png.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, MissingColumnError, render


def _parse_range(text):
    lo, hi = text.split(":")
    return float(lo), float(hi)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wlcfigures")
    sub = parser.add_subparsers(dest="command", required=True)

    one = sub.add_parser("render", help="render selected curves to one image")
    one.add_argument("output", help="output image path (.png)")
    one.add_argument("csvs", nargs="+", help="input CSV file(s)")
    one.add_argument("--labels", default=None, help="comma-separated curve labels")
    one.add_argument("--title", default="")
    one.add_argument("--x-range", default=None, help="lo:hi")
    one.add_argument("--y-range", default=None, help="lo:hi")

    every = sub.add_parser("all", help="render every CSV in a directory")
    every.add_argument("csv_dir")
    every.add_argument("out_dir")

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            spec = FigureSpec(
                csv_paths=tuple(args.csvs),
                output_path=args.output,
                labels=tuple(args.labels.split(",")) if args.labels else None,
                title=args.title,
                x_range=_parse_range(args.x_range) if args.x_range else None,
                y_range=_parse_range(args.y_range) if args.y_range else None,
            )
            out, labels = render(spec)
            print(f"wrote {out} ({len(labels)} curves)")
            return 0
        csv_dir = Path(args.csv_dir)
        paths = sorted(csv_dir.glob("*.csv"))
        if not paths:
            print(f"no CSV files in {csv_dir}", file=sys.stderr)
            return 1
        out_dir = Path(args.out_dir)
        for p in paths:
            spec = FigureSpec(
                csv_paths=(str(p),),
                output_path=str(out_dir / (p.stem + ".png")),
                title=p.stem,
            )
            out, labels = render(spec)
            print(f"wrote {out} ({len(labels)} curves)")
        return 0
    except (MissingColumnError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
