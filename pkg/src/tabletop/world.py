"""Grid world model: states, the move action, and goal evaluation.

Objects live on a small rectangular grid of cells and can be stacked on
one another.  A state maps every object to its immediate supporter (a
cell or another object) and to one of three symbolic orientations.  The
single action `move(obj, dest, orient)` picks an object up and places it
at a destination with the given orientation.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

from .errors import InadmissibleAction, InvalidState, UnknownEntity, UnknownObject


@functools.total_ordering
class Orientation(Enum):
    """One of three placement orientations; definition order is canonical."""

    VERT = "vert"
    HORIZ_X = "horiz_x"
    HORIZ_Y = "horiz_y"

    @property
    def rank(self) -> int:
        return _ORIENTATION_RANK[self]

    def __lt__(self, other: "Orientation") -> bool:
        if not isinstance(other, Orientation):
            return NotImplemented
        return self.rank < other.rank

    def __str__(self) -> str:
        return self.value


ORIENTATIONS: tuple[Orientation, ...] = tuple(Orientation)
_ORIENTATION_RANK = {o: i for i, o in enumerate(ORIENTATIONS)}

# Input aliases normalized at parse time.
_ORIENTATION_ALIASES = {"hox": "horiz_x", "hoy": "horiz_y"}


def parse_orientation(text: str) -> Orientation:
    name = _ORIENTATION_ALIASES.get(text, text)
    for orient in ORIENTATIONS:
        if orient.value == name:
            return orient
    raise ValueError(f"unknown orientation {text!r}")


@dataclass(frozen=True, slots=True, order=True)
class Cell:
    """A grid cell, addressed by column x (lateral) and depth row y."""

    x: int
    y: int

    @property
    def name(self) -> str:
        return f"loc_{self.x}x{self.y}"

    def __str__(self) -> str:
        return self.name


_CELL_NAME = re.compile(r"loc_(\d+)x(\d+)\Z")


def parse_cell(name: str) -> Cell:
    m = _CELL_NAME.match(name)
    if m is None:
        raise ValueError(f"not a cell name: {name!r}")
    return Cell(int(m.group(1)), int(m.group(2)))


# An entity is anything that can support an object or serve as a move
# destination: a grid cell or another object (by name).
ObjectId = str
Entity = Union[Cell, ObjectId]


def entity_name(entity: Entity) -> str:
    return entity.name if isinstance(entity, Cell) else entity


def parse_entity(name: str) -> Entity:
    return parse_cell(name) if name.startswith("loc_") else name


@dataclass(frozen=True, slots=True)
class DomainConfig:
    """Grid dimensions and global action preconditions."""

    width: int = 5
    depth: int = 3
    # Only stack-top objects may be picked up.  Turning this off lets a
    # buried object move and drags its whole substack's at-chain along.
    require_clear: bool = True

    def in_grid(self, cell: Cell) -> bool:
        return 0 <= cell.x < self.width and 0 <= cell.y < self.depth

    def cells(self) -> tuple[Cell, ...]:
        return _grid_cells(self.width, self.depth)


@functools.lru_cache(maxsize=None)
def _grid_cells(width: int, depth: int) -> tuple[Cell, ...]:
    cells = [Cell(x, y) for x in range(width) for y in range(depth)]
    return tuple(sorted(cells, key=lambda c: c.name))


@dataclass(frozen=True, slots=True)
class MoveAction:
    """Pick `obj` up and place it at `dest` with orientation `orient`."""

    obj: ObjectId
    dest: Entity
    orient: Orientation

    def __post_init__(self) -> None:
        if isinstance(self.dest, str) and self.dest == self.obj:
            raise ValueError(f"{self.obj} cannot be its own destination")

    def sort_key(self) -> tuple[str, str, int]:
        return (self.obj, entity_name(self.dest), self.orient.rank)

    def __str__(self) -> str:
        return f"move({self.obj},{entity_name(self.dest)},{self.orient})"


@dataclass(frozen=True)
class State:
    """Immutable snapshot: supporter and orientation of every object.

    `at[obj]` is the immediate supporter of `obj`; support chains always
    terminate at a cell.  Treat instances as read-only values.
    """

    at: dict[ObjectId, Entity]
    ori: dict[ObjectId, Orientation]

    def objects(self) -> tuple[ObjectId, ...]:
        return tuple(sorted(self.at))

    def supporter(self, obj: ObjectId) -> Entity:
        try:
            return self.at[obj]
        except KeyError:
            raise UnknownObject(obj) from None

    def orientation(self, obj: ObjectId) -> Orientation:
        try:
            return self.ori[obj]
        except KeyError:
            raise UnknownObject(obj) from None


def validate_state(state: State, config: DomainConfig) -> None:
    """Raise InvalidState unless occupancy/acyclicity/grounding all hold."""
    if set(state.at) != set(state.ori):
        raise InvalidState("at/ori domains differ")
    seen_supporters: set[str] = set()
    for obj, sup in state.at.items():
        key = entity_name(sup)
        if key in seen_supporters:
            raise InvalidState(f"two objects share supporter {key}")
        seen_supporters.add(key)
        if isinstance(sup, Cell):
            if not config.in_grid(sup):
                raise InvalidState(f"{sup.name} outside {config.width}x{config.depth} grid")
        elif sup not in state.at:
            raise InvalidState(f"{obj} rests on undeclared object {sup}")
    for obj in state.at:
        base_cell(state, obj)  # raises on cycles


def base_cell(state: State, entity: Entity) -> Cell:
    """The cell at the bottom of the stack `entity` belongs to."""
    hops = 0
    current = entity
    while not isinstance(current, Cell):
        if current not in state.at:
            raise UnknownEntity(current)
        current = state.at[current]
        hops += 1
        if hops > len(state.at):
            raise InvalidState(f"support cycle through {entity_name(entity)}")
    return current


def occupant_map(state: State) -> dict[str, ObjectId]:
    """Supporter name -> the object resting directly on it."""
    return {entity_name(sup): obj for obj, sup in state.at.items()}


def top_entity(state: State, cell: Cell, ignoring: ObjectId | None = None) -> Entity:
    """Topmost entity of the stack rooted at `cell`.

    With `ignoring` set, the named object is treated as lifted off the
    stack, so the entity underneath it becomes the top.
    """
    occupants = occupant_map(state)
    current: Entity = cell
    while True:
        above = occupants.get(entity_name(current))
        if above is None or above == ignoring:
            return current
        current = above


def is_clear(state: State, obj: ObjectId) -> bool:
    if obj not in state.at:
        raise UnknownObject(obj)
    return obj not in {entity_name(sup) for sup in state.at.values()}


def is_below(state: State, base: Entity, obj: ObjectId) -> bool:
    """True iff following supporters downward from `obj` reaches `base`.

    Transitive over any number of links; irreflexive on objects.
    """
    if obj not in state.at:
        raise UnknownObject(obj)
    if isinstance(base, str) and base not in state.at:
        raise UnknownEntity(base)
    target = entity_name(base)
    current: Entity = state.at[obj]
    for _ in range(len(state.at) + 1):
        if entity_name(current) == target:
            return True
        if isinstance(current, Cell):
            return False
        current = state.at[current]
    raise InvalidState(f"support cycle through {obj}")


# --------------------------------------------------------------------------
# Goals
# --------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class AtLiteral:
    """Immediate supporter of `obj` equals `entity`."""

    obj: ObjectId
    entity: Entity


@dataclass(frozen=True, slots=True)
class OriLiteral:
    """Orientation of `obj` equals `orient`."""

    obj: ObjectId
    orient: Orientation


@dataclass(frozen=True, slots=True)
class BelowLiteral:
    """`base` lies (transitively) below `obj`."""

    base: Entity
    obj: ObjectId


FluentLiteral = Union[AtLiteral, OriLiteral, BelowLiteral]


@dataclass(frozen=True, slots=True)
class Goal:
    """Conjunction of fluent literals, tested on the final state."""

    literals: tuple[FluentLiteral, ...]


def literal_holds(state: State, literal: FluentLiteral) -> bool:
    if isinstance(literal, AtLiteral):
        return entity_name(state.supporter(literal.obj)) == entity_name(literal.entity)
    if isinstance(literal, OriLiteral):
        return state.orientation(literal.obj) == literal.orient
    return is_below(state, literal.base, literal.obj)


def goal_holds(state: State, goal: Goal) -> bool:
    return all(literal_holds(state, lit) for lit in goal.literals)


def unsatisfied_objects(state: State, goal: Goal) -> int:
    """Number of objects with at least one violated goal literal.

    Each literal constrains exactly one object, and with the clear
    precondition on, an object's fluents change only when it is moved
    itself, so this is a lower bound on the number of moves still needed.
    """
    pending: set[ObjectId] = set()
    for lit in goal.literals:
        obj = lit.obj
        if obj not in pending and not literal_holds(state, lit):
            pending.add(obj)
    return len(pending)


# --------------------------------------------------------------------------
# The move action
# --------------------------------------------------------------------------

# The `compiled` argument accepted below is a duck-typed hook filled in
# by the precomputation strategy: anything with
#   stack_unstable(top_obj, top_orient, bottom_obj, bottom_orient) -> bool
#   blocked_cells(state, ignoring) -> container of Cell
# works; see strategies.CompiledChecks.


def normalize_destination(state: State, action: MoveAction) -> Entity:
    """Resolve a destination to the actual supporter after the move.

    A cell destination means "on top of the stack rooted at that cell";
    an object destination resolves to the top of that object's stack.
    The moved object itself is treated as already lifted.
    """
    dest = action.dest
    if isinstance(dest, Cell):
        root = dest
    else:
        if dest not in state.at:
            raise UnknownObject(dest)
        root = base_cell(state, dest)
    return top_entity(state, root, ignoring=action.obj)


def check_action(
    state: State,
    action: MoveAction,
    config: DomainConfig,
    compiled=None,
) -> Entity:
    """Validate all built-in preconditions; return the normalized destination.

    Raises InadmissibleAction (or UnknownObject) on the first violation.
    """
    if action.obj not in state.at:
        raise UnknownObject(action.obj)
    if isinstance(action.dest, Cell) and not config.in_grid(action.dest):
        raise InadmissibleAction(f"{action}: destination outside grid")
    if config.require_clear and not is_clear(state, action.obj):
        raise InadmissibleAction(f"{action}: {action.obj} has an object on top")
    target = normalize_destination(state, action)
    if entity_name(target) == entity_name(state.at[action.obj]):
        raise InadmissibleAction(f"{action}: already there")
    if isinstance(target, str) and is_below(state, action.obj, target):
        raise InadmissibleAction(f"{action}: destination rests on {action.obj}")
    if compiled is not None:
        _check_compiled(state, action, target, compiled)
    return target


def _check_compiled(state: State, action: MoveAction, target: Entity, compiled) -> None:
    if isinstance(target, str) and compiled.stack_unstable(
        action.obj, action.orient, target, state.ori[target]
    ):
        raise InadmissibleAction(f"{action}: unstable stack on {target}")
    unreachable = compiled.blocked_cells(state, ignoring=action.obj)
    if base_cell(state, action.obj) in unreachable:
        raise InadmissibleAction(f"{action}: pick is blocked")
    dest_cell = target if isinstance(target, Cell) else base_cell(state, target)
    if dest_cell in unreachable:
        raise InadmissibleAction(f"{action}: placement is blocked")


def apply_action(
    state: State,
    action: MoveAction,
    config: DomainConfig,
    compiled=None,
) -> State:
    """Successor state after an admissible action; all other fluents inert."""
    target = check_action(state, action, config, compiled)
    return _successor(state, action, target)


def _successor(state: State, action: MoveAction, target: Entity) -> State:
    at = dict(state.at)
    ori = dict(state.ori)
    at[action.obj] = target
    ori[action.obj] = action.orient
    return State(at, ori)


def expand(
    state: State,
    config: DomainConfig,
    compiled=None,
) -> Iterator[tuple[MoveAction, State]]:
    """All admissible actions with their successor states, in canonical order.

    Canonical order: object name, then destination cell name, then
    orientation.  Only cell destinations are generated; stacking is
    expressed by targeting an occupied cell.
    """
    occupants = occupant_map(state)
    bases = {obj: base_cell(state, obj) for obj in state.at}
    tops: dict[Cell, Entity] = {}
    for cell in config.cells():
        current: Entity = cell
        while True:
            above = occupants.get(entity_name(current))
            if above is None:
                break
            current = above
        tops[cell] = current

    for obj in sorted(state.at):
        if config.require_clear and obj in occupants:
            continue
        unreachable: frozenset[Cell] = frozenset()
        if compiled is not None:
            unreachable = compiled.blocked_cells(state, ignoring=obj)
            if bases[obj] in unreachable:
                continue
        supporter_name = entity_name(state.at[obj])
        for cell in config.cells():
            if cell in unreachable:
                continue
            if cell == bases[obj]:
                # Lifting obj (and anything riding on it) exposes its supporter.
                top: Entity = state.at[obj]
            else:
                top = tops[cell]
            if entity_name(top) == supporter_name:
                continue
            for orient in ORIENTATIONS:
                if (
                    compiled is not None
                    and isinstance(top, str)
                    and compiled.stack_unstable(obj, orient, top, state.ori[top])
                ):
                    continue
                action = MoveAction(obj, cell, orient)
                yield action, _successor(state, action, top)


def enumerate_actions(
    state: State,
    config: DomainConfig,
    compiled=None,
) -> list[MoveAction]:
    """Every admissible action in `state`, in the canonical total order."""
    return [action for action, _ in expand(state, config, compiled)]
