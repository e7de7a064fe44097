"""Command line front end.

Exit codes: 0 success, 1 per-entry export failures, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ExportError
from .suite import export_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="integral-export",
        description="Export active-space electron integrals as FCIDUMP files",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    exp = sub.add_parser("export", help="run every entry in a manifest",
                         allow_abbrev=False)
    exp.add_argument("--spec", required=True, help="manifest JSON file")
    exp.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = export_suite(args.spec, args.out)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(
        {"exported": len(summary["exports"]),
         "failed": len(summary["errors"])},
    ))
    for err in summary["errors"]:
        print(f"error: {err['name']}: {err['error']}", file=sys.stderr)
    return 1 if summary["errors"] else 0


if __name__ == "__main__":
    sys.exit(main())
