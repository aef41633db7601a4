"""Command-line benchmark driver.

Exit codes: 0 on success, 2 on any input parse error, 3 when at least
one cell timed out.  Set PLAN_LOG=debug|info|warning for verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .bench import emit_report, sweep
from .errors import ParseError
from .formats import load_instance, render_plan
from .strategies import STRATEGIES, parse_request


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan",
        description="Benchmark perception-integration strategies on tabletop planning instances.",
    )
    parser.add_argument(
        "--instance",
        action="append",
        required=True,
        metavar="FILE",
        help="instance file; repeat for a sweep over several instances",
    )
    parser.add_argument("--catalog", required=True, metavar="FILE", help="shape catalog file")
    parser.add_argument(
        "--strategy",
        default="pre",
        metavar="|".join(STRATEGIES),
        help="strategy, or a comma-separated list for a sweep",
    )
    parser.add_argument(
        "--task",
        default="first",
        metavar="first|count:<N>",
        help="plan request, or a comma-separated list for a sweep",
    )
    parser.add_argument("--maxstep", type=int, default=None, help="override the instance horizon")
    parser.add_argument("--budget-secs", type=float, default=2000.0, help="per-run time budget")
    parser.add_argument("--runs", type=int, default=5, help="repetitions per cell")
    parser.add_argument(
        "--report", choices=("table", "csv", "plotdata"), default="table", help="output format"
    )
    parser.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    parser.add_argument(
        "--emit-plans",
        action="store_true",
        help="also print the feasible plans of each cell's first run",
    )
    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("PLAN_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        strategies = [s.strip() for s in args.strategy.split(",") if s.strip()]
        for strategy in strategies:
            if strategy not in STRATEGIES:
                parser.error(f"unknown strategy {strategy!r}")
        tasks = [parse_request(t.strip()) for t in args.task.split(",") if t.strip()]
        instances = [
            load_instance(path, args.catalog, maxstep_override=args.maxstep)
            for path in args.instance
        ]
    except (ParseError, ValueError, OSError) as exc:
        print(f"plan: {exc}", file=sys.stderr)
        return 2

    rows = sweep(instances, strategies, tasks, args.budget_secs, args.runs)

    report = emit_report(rows, args.report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report if report.endswith("\n") else report + "\n")
    else:
        print(report)

    if args.emit_plans:
        for row in rows:
            print(f"# {row.instance} / {row.strategy} / {row.task}")
            for plan in row.outcomes[0].feasible_plans:
                print(render_plan(plan) if plan else "(empty plan)")
                print("--")

    return 3 if any(row.timed_out for row in rows) else 0


if __name__ == "__main__":
    raise SystemExit(main())
