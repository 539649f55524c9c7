"""Invocation: plot --kind trace|sweep --in PATH... --out PATH [--log-y]"""

from __future__ import annotations

import argparse
import sys

from .io import RecordSchemaError
from .render import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from hypflow records"
    )
    parser.add_argument("--kind", required=True, choices=("trace", "sweep"))
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="PATH", help="record JSON files or a sweep CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--log-y", action="store_true")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(inputs=tuple(args.inputs), output=args.out,
                          kind=args.kind, log_y=args.log_y)
        path = render(spec)
    except RecordSchemaError as exc:
        print(f"error: {exc} (offending field: {exc.field})", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
