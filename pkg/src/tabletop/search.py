"""Bounded-horizon plan enumeration with learned prohibitions.

Plans are enumerated by iterative lengthening: all goal-reaching plans of
length L are emitted, in lexicographic action order, before any plan of
length L+1.  Distinct action sequences reaching the same state are
distinct plans, so there is no duplicate-state detection.  Subtrees that
provably cannot reach the goal in the remaining steps are cut using an
admissible move-count bound, which never changes the emitted set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Collection, Iterator

from .errors import HorizonExhausted
from .world import (
    Cell,
    DomainConfig,
    Entity,
    FluentLiteral,
    Goal,
    MoveAction,
    ObjectId,
    Orientation,
    State,
    base_cell,
    entity_name,
    expand,
    goal_holds,
    literal_holds,
    normalize_destination,
    unsatisfied_objects,
)

Plan = tuple[MoveAction, ...]

# Guard against runaway horizons; well above anything the bundled
# instances need.
MAX_MAXSTEP = 10


@dataclass(frozen=True, slots=True)
class Above:
    """Pattern token: any entity whose stack is rooted at this cell."""

    cell: Cell


@dataclass(frozen=True, slots=True)
class ActionPattern:
    """Action template with wildcards (None) in any slot.

    The object slot matches by name, or via Above by the base cell of the
    object's stack.  The destination slot matches the action's normalized
    destination: exactly for entities, by stack base cell for Above.
    """

    obj: ObjectId | Above | None = None
    dest: Entity | Above | None = None
    orient: Orientation | None = None


@dataclass(frozen=True, slots=True)
class ConditionalProhibition:
    """Forbid actions matching `pattern` whenever `condition` holds.

    The condition is a conjunction of fluent literals evaluated in the
    state the action would be taken in.  `exempt` names an object the
    prohibition never applies to: a reach-derived rule must not forbid
    moving the blocking object itself, since picking it up is what ends
    the blockage.
    """

    pattern: ActionPattern
    condition: tuple[FluentLiteral, ...] = ()
    exempt: ObjectId | None = None


def _condition_holds(state: State, prohibition: ConditionalProhibition) -> bool:
    return all(literal_holds(state, lit) for lit in prohibition.condition)


def _pattern_matches(
    state: State,
    pattern: ActionPattern,
    action: MoveAction,
    target: Entity,
) -> bool:
    if isinstance(pattern.obj, Above):
        if base_cell(state, action.obj) != pattern.obj.cell:
            return False
    elif pattern.obj is not None and pattern.obj != action.obj:
        return False
    if isinstance(pattern.dest, Above):
        dest_cell = target if isinstance(target, Cell) else base_cell(state, target)
        if dest_cell != pattern.dest.cell:
            return False
    elif pattern.dest is not None and entity_name(pattern.dest) != entity_name(target):
        return False
    return pattern.orient is None or pattern.orient == action.orient


def prohibition_blocks(
    prohibition: ConditionalProhibition,
    state: State,
    action: MoveAction,
) -> bool:
    """True iff the prohibition forbids taking `action` in `state`."""
    if action.obj == prohibition.exempt:
        return False
    if not _condition_holds(state, prohibition):
        return False
    target = normalize_destination(state, action)
    return _pattern_matches(state, prohibition.pattern, action, target)


def _blocked_by_active(
    state: State,
    action: MoveAction,
    target: Entity,
    active: list[ConditionalProhibition],
) -> bool:
    for prohibition in active:
        if action.obj == prohibition.exempt:
            continue
        if _pattern_matches(state, prohibition.pattern, action, target):
            return True
    return False


def enumerate_plans(
    init: State,
    goal: Goal,
    maxstep: int,
    config: DomainConfig,
    constraints: Collection[ConditionalProhibition] = (),
    blocked: Collection[Plan] = frozenset(),
    limit: int | None = None,
    compiled=None,
    stop: Callable[[], bool] | None = None,
) -> Iterator[Plan]:
    """Yield goal-reaching plans of length 0..maxstep in (length, lex) order.

    Plans in `blocked` (exact sequence match) are skipped.  Enumeration
    ends after `limit` plans, when `stop()` turns true, or when the
    horizon is exhausted; exhaustion with zero plans emitted raises
    HorizonExhausted.
    """
    if maxstep < 0 or maxstep > MAX_MAXSTEP:
        raise ValueError(f"maxstep must be in 0..{MAX_MAXSTEP}, got {maxstep}")
    constraints = sorted(set(constraints), key=repr)
    blocked_set = set(blocked)
    emitted = 0

    def dfs(state: State, prefix: Plan, remaining: int) -> Iterator[Plan]:
        if stop is not None and stop():
            return
        if remaining == 0:
            if goal_holds(state, goal) and prefix not in blocked_set:
                yield prefix
            return
        if config.require_clear and unsatisfied_objects(state, goal) > remaining:
            return
        active = [p for p in constraints if _condition_holds(state, p)]
        for action, successor in expand(state, config, compiled):
            if active and _blocked_by_active(state, action, successor.at[action.obj], active):
                continue
            yield from dfs(successor, prefix + (action,), remaining - 1)

    for length in range(maxstep + 1):
        for plan in dfs(init, (), length):
            yield plan
            emitted += 1
            if limit is not None and emitted >= limit:
                return
        if stop is not None and stop():
            return
    if emitted == 0:
        raise HorizonExhausted(f"no plan within maxstep {maxstep}")
