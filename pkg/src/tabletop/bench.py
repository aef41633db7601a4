"""Benchmark harness: repeated strategy runs, aggregation, and reports."""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass

from .strategies import (
    STRATEGIES,
    LoadedInstance,
    PlanRequest,
    RunOutcome,
    run_strategy,
)

log = logging.getLogger("tabletop.bench")

# Report column order used throughout.
REPORT_STRATEGY_ORDER = ("none", "filt", "pre", "repl")

CSV_HEADER = "instance,strategy,task,run,queries,feasible,infeasible,wall_ms,timed_out"


@dataclass
class RunMetrics:
    """All repetitions of one (instance, strategy, task) cell."""

    instance: str
    strategy: str
    task: str
    outcomes: list[RunOutcome]

    @property
    def runs(self) -> int:
        return len(self.outcomes)

    @property
    def timed_out(self) -> bool:
        return any(o.timed_out for o in self.outcomes)

    def mean(self, attr: str) -> float:
        return statistics.fmean(getattr(o, attr) for o in self.outcomes)

    @property
    def mean_queries(self) -> float:
        return self.mean("query_count")

    @property
    def mean_feasible(self) -> float:
        return statistics.fmean(len(o.feasible_plans) for o in self.outcomes)

    @property
    def mean_infeasible(self) -> float:
        return self.mean("infeasible_count")

    @property
    def mean_wall_ms(self) -> float:
        return statistics.fmean(o.wall_time * 1000.0 for o in self.outcomes)


def run_experiment(
    instance: LoadedInstance,
    strategy: str,
    task: PlanRequest,
    budget_secs: float = 2000.0,
    runs: int = 5,
) -> RunMetrics:
    """Run one cell `runs` times with a fresh perception view each time.

    Everything but wall time is deterministic, so repeated runs exist to
    average out timing noise only.
    """
    outcomes = []
    for i in range(runs):
        outcome = run_strategy(strategy, instance, task, budget_secs)
        log.info(
            "%s/%s/%s run %d: %d feasible, %d infeasible, %d queries, %.1f ms%s",
            instance.name,
            strategy,
            task.label,
            i,
            len(outcome.feasible_plans),
            outcome.infeasible_count,
            outcome.query_count,
            outcome.wall_time * 1000.0,
            " (timed out)" if outcome.timed_out else "",
        )
        outcomes.append(outcome)
    return RunMetrics(instance.name, strategy, task.label, outcomes)


def sweep(
    instances: list[LoadedInstance],
    strategies: list[str],
    tasks: list[PlanRequest],
    budget_secs: float = 2000.0,
    runs: int = 5,
) -> list[RunMetrics]:
    """Run every (instance, strategy, task) cell; a timeout never aborts
    the remaining cells."""
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
    rows = []
    for instance in instances:
        for task in tasks:
            for strategy in strategies:
                rows.append(run_experiment(instance, strategy, task, budget_secs, runs))
    return rows


def emit_report(rows: list[RunMetrics], format: str = "table") -> str:
    if format == "csv":
        return _emit_csv(rows)
    if format == "plotdata":
        return _emit_plotdata(rows)
    if format == "table":
        return _emit_table(rows)
    raise ValueError(f"unknown report format {format!r}")


def _emit_csv(rows: list[RunMetrics]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        for i, outcome in enumerate(row.outcomes):
            lines.append(
                f"{row.instance},{row.strategy},{row.task},{i},"
                f"{outcome.query_count},{len(outcome.feasible_plans)},"
                f"{outcome.infeasible_count},{outcome.wall_time * 1000.0:.3f},"
                f"{str(outcome.timed_out).lower()}"
            )
    return "\n".join(lines)


def _emit_plotdata(rows: list[RunMetrics]) -> str:
    lines = ["instance strategy task mean_wall_ms"]
    for row in rows:
        lines.append(f"{row.instance} {row.strategy} {row.task} {row.mean_wall_ms:.3f}")
    return "\n".join(lines)


def _strategy_order(strategy: str) -> int:
    return REPORT_STRATEGY_ORDER.index(strategy)


def _emit_table(rows: list[RunMetrics]) -> str:
    out: list[str] = []
    instances = sorted({r.instance for r in rows})
    metric_rows = (
        ("queries", "mean_queries"),
        ("feasible", "mean_feasible"),
        ("infeasible", "mean_infeasible"),
        ("wall ms", "mean_wall_ms"),
    )
    for instance in instances:
        for task in sorted({r.task for r in rows if r.instance == instance}):
            cells = sorted(
                (r for r in rows if r.instance == instance and r.task == task),
                key=lambda r: _strategy_order(r.strategy),
            )
            out.append(f"{instance} / {task}")
            header = f"{'':<12}" + "".join(f"{c.strategy:>12}" for c in cells)
            out.append(header)
            for label, attr in metric_rows:
                line = f"{label:<12}" + "".join(f"{getattr(c, attr):>12.1f}" for c in cells)
                out.append(line)
            flagged = [c.strategy for c in cells if c.timed_out]
            if flagged:
                out.append(f"{'timed out':<12}" + ", ".join(flagged))
            out.append("")
    return "\n".join(out).rstrip("\n") + ("\n" if out else "")
