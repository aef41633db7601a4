"""The four perception-integration strategies and plan verification.

`none`   plans blind and ships whatever comes out first.
`pre`    queries every shape up front, compiles the answers into the
         action generator, and only ever produces feasible plans.
`filt`   plans blind but verifies each candidate against perception,
         discarding failures until enough feasible plans are found.
`repl`   verifies like `filt`, but turns every failure into conditional
         prohibitions and restarts the planner so whole families of
         doomed plans are never generated again.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import HorizonExhausted, InadmissibleAction, UnknownEntity, UnknownObject
from .geometry import (
    CheckQuery,
    OcclusionRelation,
    ShapeCatalog,
    collect_checks,
    evaluate_check,
    reach_blocked,
    unstackable,
)
from .perception import PerceptView, SceneTruth, TaskSpec, bottom_up, occlusion_of
from .search import (
    Above,
    ActionPattern,
    ConditionalProhibition,
    Plan,
    enumerate_plans,
)
from .world import (
    ORIENTATIONS,
    BelowLiteral,
    Cell,
    DomainConfig,
    Goal,
    ObjectId,
    Orientation,
    OriLiteral,
    State,
    base_cell,
    check_action,
    _successor,
)

STRATEGIES = ("none", "pre", "filt", "repl")


@dataclass(frozen=True, slots=True)
class FailureReason:
    """One failed check; `check` is None when the plan could not even be
    simulated (an inadmissible step)."""

    step: int
    check: CheckQuery | None
    message: str


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    reasons: tuple[FailureReason, ...] = ()


def verify_plan(
    plan: Plan,
    init: State,
    view,
    catalog: ShapeCatalog,
    occl: OcclusionRelation,
    config: DomainConfig,
) -> FeasibilityVerdict:
    """Simulate the plan and run every external check it depends on.

    Shapes are fetched lazily through `view.shape_of`, only for the
    objects each check needs, so the query ledger reflects exactly the
    perception work the verification required.  All failures across the
    whole plan are collected, not just the first.
    """
    reasons: list[FailureReason] = []
    state = init
    for step, action in enumerate(plan):
        try:
            target = check_action(state, action, config)
        except (InadmissibleAction, UnknownObject, UnknownEntity) as exc:
            reasons.append(FailureReason(step, None, f"not simulable: {exc}"))
            return FeasibilityVerdict(False, tuple(reasons))
        for check in collect_checks(state, action, occl):
            if evaluate_check(catalog, occl, check, view.shape_of):
                reasons.append(FailureReason(step, check, "check failed"))
        state = _successor(state, action, target)
    return FeasibilityVerdict(not reasons, tuple(reasons))


@dataclass(frozen=True)
class CompiledChecks:
    """Shape-indexed truth tables consulted by the action generator.

    `unstable` holds every (top, top_orient, bottom, bottom_orient)
    object tuple that would make an unstable stack; `blocking` maps a
    (blocker, cell, orientation) placement to the cells it makes
    unreachable.  Both are total over the named objects, so lookups need
    no further perception.
    """

    unstable: frozenset[tuple[ObjectId, Orientation, ObjectId, Orientation]]
    blocking: dict[tuple[ObjectId, Cell, Orientation], frozenset[Cell]]

    def stack_unstable(
        self,
        top: ObjectId,
        top_o: Orientation,
        bottom: ObjectId,
        bottom_o: Orientation,
    ) -> bool:
        return (top, top_o, bottom, bottom_o) in self.unstable

    def blocked_cells(self, state: State, ignoring: ObjectId) -> frozenset[Cell]:
        blocked: frozenset[Cell] = frozenset()
        for obj in state.at:
            if obj == ignoring:
                continue
            entry = self.blocking.get((obj, base_cell(state, obj), state.ori[obj]))
            if entry:
                blocked |= entry
        return blocked


def precompile_checks(
    view: PerceptView,
    catalog: ShapeCatalog,
    occl: OcclusionRelation,
) -> CompiledChecks:
    """Query every named object's shape and tabulate both predicates.

    Stability is tabulated over all ordered object pairs and the nine
    orientation pairs; blocking over every (object, cell, orientation)
    placement.  The tables close over shapes only, so they stay valid as
    objects move during the search.
    """
    shapes = {obj: view.shape_of(obj) for obj in sorted(view.naming)}
    unstable = set()
    for top, top_shape in shapes.items():
        for bottom, bottom_shape in shapes.items():
            if top == bottom:
                continue
            for top_o in ORIENTATIONS:
                for bottom_o in ORIENTATIONS:
                    if unstackable(catalog, top_shape, top_o, bottom_shape, bottom_o):
                        unstable.add((top, top_o, bottom, bottom_o))
    cells = [Cell(x, y) for x in range(occl.width) for y in range(occl.depth)]
    blocking: dict[tuple[ObjectId, Cell, Orientation], frozenset[Cell]] = {}
    for obj, shape in shapes.items():
        for cell in cells:
            for orient in ORIENTATIONS:
                behind = frozenset(
                    other
                    for other in cells
                    if reach_blocked(catalog, occl, shape, cell, orient, other)
                )
                if behind:
                    blocking[(obj, cell, orient)] = behind
    return CompiledChecks(frozenset(unstable), blocking)


def derive_constraints(
    view: PerceptView,
    catalog: ShapeCatalog,
    occl: OcclusionRelation,
) -> frozenset[ConditionalProhibition]:
    """Conditional prohibitions implied by every shape known so far.

    Stacking rules become prohibitions on (top, bottom, orientation)
    move patterns, collapsed to wildcards where a whole orientation row
    or the full pair is unstable.  Blocker-capable shapes yield, per
    occlusion pair (front, behind), one prohibition against placing into
    the behind column and one against picking from it, both conditioned
    on the blocker actually standing at the front cell in the blocking
    orientation.  Output grows monotonically with the known-shape set.
    """
    shapes = view.known_shapes()
    objs = sorted(shapes)
    prohibitions: set[ConditionalProhibition] = set()

    for top in objs:
        for bottom in objs:
            if top == bottom:
                continue
            table = {
                (top_o, bottom_o): unstackable(
                    catalog, shapes[top], top_o, shapes[bottom], bottom_o
                )
                for top_o in ORIENTATIONS
                for bottom_o in ORIENTATIONS
            }
            if all(table.values()):
                prohibitions.add(
                    ConditionalProhibition(ActionPattern(obj=top, dest=bottom))
                )
                continue
            covered: set[tuple[Orientation, Orientation]] = set()
            for bottom_o in ORIENTATIONS:
                if all(table[(top_o, bottom_o)] for top_o in ORIENTATIONS):
                    prohibitions.add(
                        ConditionalProhibition(
                            ActionPattern(obj=top, dest=bottom),
                            condition=(OriLiteral(bottom, bottom_o),),
                        )
                    )
                    covered.update((top_o, bottom_o) for top_o in ORIENTATIONS)
            for top_o in ORIENTATIONS:
                if all(table[(top_o, bottom_o)] for bottom_o in ORIENTATIONS):
                    prohibitions.add(
                        ConditionalProhibition(
                            ActionPattern(obj=top, dest=bottom, orient=top_o)
                        )
                    )
                    covered.update((top_o, bottom_o) for bottom_o in ORIENTATIONS)
            for (top_o, bottom_o), bad in table.items():
                if bad and (top_o, bottom_o) not in covered:
                    prohibitions.add(
                        ConditionalProhibition(
                            ActionPattern(obj=top, dest=bottom, orient=top_o),
                            condition=(OriLiteral(bottom, bottom_o),),
                        )
                    )

    for obj in objs:
        for rule in catalog.blocker_rules:
            if rule.shape != shapes[obj]:
                continue
            for front, behind in sorted(occl.pairs, key=lambda p: (p[0].name, p[1].name)):
                condition = (BelowLiteral(front, obj), OriLiteral(obj, rule.orient))
                prohibitions.add(
                    ConditionalProhibition(
                        ActionPattern(dest=Above(behind)),
                        condition=condition,
                        exempt=obj,
                    )
                )
                prohibitions.add(
                    ConditionalProhibition(
                        ActionPattern(obj=Above(behind)),
                        condition=condition,
                    )
                )
    return frozenset(prohibitions)


# --------------------------------------------------------------------------
# Strategy runner
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LoadedInstance:
    """A parsed problem instance together with its shape catalog."""

    name: str
    scene: SceneTruth
    task: TaskSpec
    maxstep: int
    catalog: ShapeCatalog

    @property
    def goal(self) -> Goal:
        return self.task.goal

    @property
    def config(self) -> DomainConfig:
        return DomainConfig(self.scene.width, self.scene.depth)

    def occlusion(self) -> OcclusionRelation:
        return occlusion_of(self.scene)

    def fresh_view(self) -> PerceptView:
        return bottom_up(self.scene, self.task)


@dataclass(frozen=True, slots=True)
class PlanRequest:
    """How many feasible plans a run must produce."""

    kind: str  # "first" | "count"
    count: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("first", "count"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    @property
    def label(self) -> str:
        return "first" if self.kind == "first" else f"count:{self.count}"


FIRST = PlanRequest("first", 1)


def parse_request(text: str) -> PlanRequest:
    if text == "first":
        return FIRST
    if text.startswith("count:"):
        return PlanRequest("count", int(text.split(":", 1)[1]))
    raise ValueError(f"task must be 'first' or 'count:<N>', got {text!r}")


@dataclass(frozen=True)
class ReplRound:
    """One infeasible plan and the constraint set before/after learning."""

    plan: Plan
    constraints_before: frozenset[ConditionalProhibition]
    constraints_after: frozenset[ConditionalProhibition]


@dataclass
class RunOutcome:
    feasible_plans: list[Plan]
    infeasible_count: int
    query_count: int
    timed_out: bool
    wall_time: float  # seconds, clamped to the budget on timeout
    rounds: tuple[ReplRound, ...] = ()


def run_strategy(
    strategy: str,
    instance: LoadedInstance,
    task: PlanRequest = FIRST,
    budget_secs: float = 2000.0,
) -> RunOutcome:
    """Execute one strategy run against a fresh perception view.

    A budget overrun never raises; the outcome keeps whatever was
    produced and is flagged `timed_out` with `wall_time` clamped to the
    budget.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    start = time.monotonic()
    deadline = start + budget_secs

    def out_of_time() -> bool:
        return time.monotonic() > deadline

    view = instance.fresh_view()
    init = view.state
    occl = instance.occlusion()
    config = instance.config
    required = task.count

    feasible: list[Plan] = []
    infeasible = 0
    rounds: list[ReplRound] = []

    if strategy == "none":
        emitted: list[Plan] = []
        try:
            emitted = list(
                enumerate_plans(
                    init,
                    instance.goal,
                    instance.maxstep,
                    config,
                    limit=required,
                    stop=out_of_time,
                )
            )
        except HorizonExhausted:
            pass
        truth = view.ground_truth()
        for plan in emitted:
            verdict = verify_plan(plan, init, truth, instance.catalog, occl, config)
            if verdict.feasible:
                feasible.append(plan)
            else:
                infeasible += 1

    elif strategy == "pre":
        compiled = precompile_checks(view, instance.catalog, occl)
        try:
            feasible = list(
                enumerate_plans(
                    init,
                    instance.goal,
                    instance.maxstep,
                    config,
                    limit=required,
                    compiled=compiled,
                    stop=out_of_time,
                )
            )
        except HorizonExhausted:
            pass

    elif strategy == "filt":
        blocked: set[Plan] = set()
        try:
            for plan in enumerate_plans(
                init, instance.goal, instance.maxstep, config, blocked=blocked, stop=out_of_time
            ):
                if out_of_time():
                    break
                verdict = verify_plan(plan, init, view, instance.catalog, occl, config)
                if verdict.feasible:
                    feasible.append(plan)
                    if len(feasible) >= required:
                        break
                else:
                    infeasible += 1
                    blocked.add(plan)
        except HorizonExhausted:
            pass

    else:  # repl
        constraints: set[ConditionalProhibition] = set()
        blocked = set()
        while len(feasible) < required and not out_of_time():
            restarted = False
            try:
                for plan in enumerate_plans(
                    init,
                    instance.goal,
                    instance.maxstep,
                    config,
                    constraints=constraints,
                    blocked=set(blocked),
                    stop=out_of_time,
                ):
                    if out_of_time():
                        break
                    verdict = verify_plan(plan, init, view, instance.catalog, occl, config)
                    if verdict.feasible:
                        feasible.append(plan)
                        blocked.add(plan)
                        if len(feasible) >= required:
                            break
                    else:
                        infeasible += 1
                        blocked.add(plan)
                        before = frozenset(constraints)
                        constraints |= derive_constraints(view, instance.catalog, occl)
                        rounds.append(ReplRound(plan, before, frozenset(constraints)))
                        restarted = True
                        break
            except HorizonExhausted:
                break
            if not restarted:
                break

    wall = time.monotonic() - start
    timed_out = wall > budget_secs
    return RunOutcome(
        feasible_plans=feasible,
        infeasible_count=infeasible,
        query_count=view.ledger.count,
        timed_out=timed_out,
        wall_time=min(wall, budget_secs),
        rounds=tuple(rounds),
    )
