"""Stack-stability and reach-blocking checks over a shape rule catalog.

Both checks are rule-table lookups: a stack is unstable iff some rule
matches the (top shape, top orientation, bottom shape, bottom
orientation) tuple, and a reach into a cell is blocked iff an occluding
cell in front of it holds an object matching a blocker rule.  Shapes are
opaque identifiers; no actual geometry is computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import CellOutOfRange, UnknownShape
from .world import (
    Cell,
    MoveAction,
    ObjectId,
    Orientation,
    State,
    base_cell,
    normalize_destination,
)

ShapeId = str


@dataclass(frozen=True, slots=True)
class StackRule:
    """An unstable stack pattern; None fields are wildcards."""

    top_shape: ShapeId | None = None
    top_orient: Orientation | None = None
    bottom_shape: ShapeId | None = None
    bottom_orient: Orientation | None = None

    def __post_init__(self) -> None:
        if (self.top_shape, self.top_orient, self.bottom_shape, self.bottom_orient) == (
            None,
            None,
            None,
            None,
        ):
            raise ValueError("stack rule needs at least one non-wildcard field")

    def matches(
        self,
        top: ShapeId,
        top_o: Orientation,
        bottom: ShapeId,
        bottom_o: Orientation,
    ) -> bool:
        return (
            self.top_shape in (None, top)
            and self.top_orient in (None, top_o)
            and self.bottom_shape in (None, bottom)
            and self.bottom_orient in (None, bottom_o)
        )


@dataclass(frozen=True, slots=True)
class BlockerRule:
    """Objects of this shape block reaches behind them at this orientation."""

    shape: ShapeId
    orient: Orientation


@dataclass(frozen=True)
class ShapeCatalog:
    shapes: frozenset[ShapeId]
    unstable_rules: tuple[StackRule, ...] = ()
    blocker_rules: tuple[BlockerRule, ...] = ()

    def __post_init__(self) -> None:
        for rule in self.unstable_rules:
            for shape in (rule.top_shape, rule.bottom_shape):
                if shape is not None and shape not in self.shapes:
                    raise UnknownShape(shape)
        for rule in self.blocker_rules:
            if rule.shape not in self.shapes:
                raise UnknownShape(rule.shape)

    def require(self, shape: ShapeId) -> None:
        if shape not in self.shapes:
            raise UnknownShape(shape)


@dataclass(frozen=True)
class OcclusionRelation:
    """Irreflexive set of (front, behind) cell pairs on a given grid."""

    width: int
    depth: int
    pairs: frozenset[tuple[Cell, Cell]]

    def __post_init__(self) -> None:
        for front, behind in self.pairs:
            if front == behind:
                raise ValueError(f"occlusion pair {front.name} -> itself")

    def in_grid(self, cell: Cell) -> bool:
        return 0 <= cell.x < self.width and 0 <= cell.y < self.depth

    def blocks(self, front: Cell, behind: Cell) -> bool:
        return (front, behind) in self.pairs

    def cells_behind(self, front: Cell) -> list[Cell]:
        return sorted((b for f, b in self.pairs if f == front), key=lambda c: c.name)


def unstackable(
    catalog: ShapeCatalog,
    top: ShapeId,
    top_o: Orientation,
    bottom: ShapeId,
    bottom_o: Orientation,
) -> bool:
    """True iff stacking `top` on `bottom` at these orientations is unstable.

    No matching rule means stable: the catalog lists unstable cases only.
    """
    catalog.require(top)
    catalog.require(bottom)
    return any(rule.matches(top, top_o, bottom, bottom_o) for rule in catalog.unstable_rules)


def reach_blocked(
    catalog: ShapeCatalog,
    occl: OcclusionRelation,
    blocker_shape: ShapeId,
    blocker_cell: Cell,
    blocker_o: Orientation,
    target_cell: Cell,
) -> bool:
    """True iff an object of `blocker_shape` at `blocker_cell` blocks reaching
    into `target_cell`.  Independent of whatever sits at the target.
    """
    catalog.require(blocker_shape)
    for cell in (blocker_cell, target_cell):
        if not occl.in_grid(cell):
            raise CellOutOfRange(cell.name)
    if not occl.blocks(blocker_cell, target_cell):
        return False
    return any(
        rule.shape == blocker_shape and rule.orient == blocker_o
        for rule in catalog.blocker_rules
    )


@dataclass(frozen=True, slots=True)
class StackCheck:
    """Would placing top on bottom at these orientations be unstable?"""

    top: ObjectId
    top_orient: Orientation
    bottom: ObjectId
    bottom_orient: Orientation


@dataclass(frozen=True, slots=True)
class ReachCheck:
    """Does the blocker prevent reaching the target's cell?"""

    blocker: ObjectId
    blocker_cell: Cell
    blocker_orient: Orientation
    target: ObjectId
    target_cell: Cell
    target_orient: Orientation


CheckQuery = Union[StackCheck, ReachCheck]


def collect_checks(
    state: State,
    action: MoveAction,
    occl: OcclusionRelation,
) -> list[CheckQuery]:
    """Every external check an admissible action depends on.

    One stack check when the action stacks onto an object, plus one reach
    check per potential blocker of the pick and of the placement.  A
    potential blocker is any other object whose stack's base cell is
    in-front-related to the relevant cell; blocking is decided between
    stack base cells, so whole stacks share reachability.
    """
    checks: list[CheckQuery] = []
    target = normalize_destination(state, action)
    if isinstance(target, str):
        checks.append(
            StackCheck(
                top=action.obj,
                top_orient=action.orient,
                bottom=target,
                bottom_orient=state.orientation(target),
            )
        )
    pick_cell = base_cell(state, action.obj)
    place_cell = target if isinstance(target, Cell) else base_cell(state, target)
    for other in sorted(state.at):
        if other == action.obj:
            continue
        other_base = base_cell(state, other)
        for reached_cell, reached_obj, reached_orient in (
            (pick_cell, action.obj, state.orientation(action.obj)),
            (place_cell, action.obj, action.orient),
        ):
            if occl.blocks(other_base, reached_cell):
                checks.append(
                    ReachCheck(
                        blocker=other,
                        blocker_cell=other_base,
                        blocker_orient=state.orientation(other),
                        target=reached_obj,
                        target_cell=reached_cell,
                        target_orient=reached_orient,
                    )
                )
    return checks


def evaluate_check(
    catalog: ShapeCatalog,
    occl: OcclusionRelation,
    check: CheckQuery,
    shape_of: Callable[[ObjectId], ShapeId],
) -> bool:
    """True iff the check fails (unstable stack / blocked reach).

    `shape_of` is consulted only for the objects the check actually
    needs: both ends of a stack check, the blocker of a reach check.
    """
    if isinstance(check, StackCheck):
        return unstackable(
            catalog,
            shape_of(check.top),
            check.top_orient,
            shape_of(check.bottom),
            check.bottom_orient,
        )
    return reach_blocked(
        catalog,
        occl,
        shape_of(check.blocker),
        check.blocker_cell,
        check.blocker_orient,
        check.target_cell,
    )
