"""Command-line entry point: ``plots <kind> --in table.csv --out fig.png``.

Exit codes follow the same convention as the data-producing tool:
0 success, 1 domain error (bad arguments, schema mismatch, empty data),
2 I/O error, 3 resource cap exceeded (reserved; no renderer currently
caps anything).
"""

from __future__ import annotations

import argparse
import sys

from ._version import __version__
from .render import render
from .schema import KINDS, PlotJob


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plots", description="Render figures from subalign CSV output.")
    parser.add_argument("--version", action="version", version=f"subalign-plots {__version__}")
    parser.add_argument("kind", choices=KINDS, help="figure to draw")
    parser.add_argument("--in", dest="csv_path", required=True, metavar="CSV", help="input table")
    parser.add_argument("--out", required=True, metavar="IMAGE", help="output image path (e.g. fig.png)")
    parser.add_argument(
        "--overlay", action="store_true",
        help="draw the theoretical boundary from the ach-margin zero crossings "
        "(region-heatmap and rate-vs-p; the check kinds always show their closed form)",
    )
    parser.add_argument(
        "--x", choices=("p", "m"), default="p",
        help="horizontal axis variable for region-heatmap / rate-vs-p",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        job = PlotJob(
            csv_path=args.csv_path,
            kind=args.kind,
            out_path=args.out,
            x_axis=args.x,
            overlay=args.overlay,
        )
        report = render(job)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {report.out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
