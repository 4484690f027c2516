"""Command line entry point: ``tschirn run|ledger|classify|version``.

Exit codes: 0 when every task passes or is skipped, 1 when some task fails
or stays uncertified, 2 for input that does not parse or validate.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cover import classify_parameters
from .report import ScenarioError, canonical_json, run_ledger, run_scenario


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()


def _render(report, fmt: str) -> str:
    return report.to_markdown() if fmt == "md" else report.to_json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tschirn", description="Exact checks for triple cover models.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the tasks of a scenario file")
    run.add_argument("scenario")
    run.add_argument("--format", choices=("json", "md"), default="json")
    run.add_argument("--recheck", action="store_true", help="re-validate verdicts from the certificates")
    run.add_argument("--out")
    run.add_argument("--jobs", type=int, default=4)

    led = sub.add_parser("ledger", help="propagate and check a cohomology ledger")
    led.add_argument("file")
    led.add_argument("--format", choices=("json", "md"), default="json")
    led.add_argument("--recheck", action="store_true")
    led.add_argument("--out")

    cls = sub.add_parser("classify", help="classify a parameter point (s, t)")
    cls.add_argument("--s", required=True)
    cls.add_argument("--t", required=True)

    sub.add_parser("version", help="print the version")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        if args.command == "version":
            _emit(f"tschirn {__version__}\n", None)
            return 0
        if args.command == "classify":
            try:
                s, t = Fraction(args.s), Fraction(args.t)
                cls = classify_parameters(s, t)
            except (ValueError, ZeroDivisionError) as exc:
                raise ScenarioError(str(exc)) from None
            _emit(canonical_json({"s": str(s), "t": str(t), "class": cls.kind.value, "locus": cls.locus}), None)
            return 0
        if args.command == "run":
            report = run_scenario(args.scenario, jobs=max(1, args.jobs), recheck=args.recheck)
        else:
            report = run_ledger(args.file, recheck=args.recheck)
    except ScenarioError as exc:
        print(f"tschirn: error: {exc}", file=sys.stderr)
        return 2
    _emit(_render(report, args.format), args.out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
