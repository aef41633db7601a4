"""Line-oriented text formats: instance files, shape catalogs, and plans.

All parsers are total: any input yields either a parsed value or a
ParseError carrying the offending line number.  `#` starts a comment and
blank lines are ignored everywhere.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .errors import ParseError, UnknownShape
from .geometry import BlockerRule, ShapeCatalog, StackRule
from .perception import PhysicalObject, SceneTruth, TaskSpec
from .search import Plan
from .strategies import LoadedInstance
from .world import (
    AtLiteral,
    BelowLiteral,
    Cell,
    FluentLiteral,
    Goal,
    MoveAction,
    OriLiteral,
    entity_name,
    parse_cell,
    parse_entity,
    parse_orientation,
)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _tokens(lineno: int, line: str, keyword: str, count: int) -> list[str]:
    parts = line.split()
    if len(parts) - 1 != count:
        raise ParseError(lineno, f"'{keyword}' takes {count} arguments, got {len(parts) - 1}")
    return parts[1:]


def _int(lineno: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {text!r}") from None


def _float(lineno: int, text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(lineno, f"{what} must be a number, got {text!r}") from None


_GOAL_AT = re.compile(r"at\((\w+)\)\s*=\s*(\w+)\Z")
_GOAL_ORI = re.compile(r"ori\((\w+)\)\s*=\s*(\w+)\Z")
_GOAL_BELOW = re.compile(r"below\((\w+)\s*,\s*(\w+)\)\Z")


def _parse_goal_literal(lineno: int, text: str) -> FluentLiteral:
    if m := _GOAL_AT.match(text):
        return AtLiteral(m.group(1), parse_entity(m.group(2)))
    if m := _GOAL_ORI.match(text):
        try:
            return OriLiteral(m.group(1), parse_orientation(m.group(2)))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    if m := _GOAL_BELOW.match(text):
        return BelowLiteral(parse_entity(m.group(1)), m.group(2))
    raise ParseError(lineno, f"unrecognized goal literal {text!r}")


def parse_instance(text: str) -> tuple[SceneTruth, TaskSpec, Goal, int]:
    """Parse an instance file into its scene, task, goal, and horizon."""
    width = depth = None
    camera = "none"
    infront: list[tuple[Cell, Cell]] = []
    objects: list[PhysicalObject] = []
    targets: list[tuple[str, float, float]] = []
    goal_literals: list[FluentLiteral] = []
    maxstep = 3
    seen_names: set[str] = set()
    seen_cells: set[Cell] = set()

    def check_cell(lineno: int, cell: Cell) -> Cell:
        if width is None:
            raise ParseError(lineno, "grid must be declared first")
        if not (0 <= cell.x < width and 0 <= cell.y < depth):
            raise ParseError(lineno, f"{cell.name} outside {width}x{depth} grid")
        return cell

    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "missing grid declaration")

    for lineno, line in lines:
        keyword = line.split()[0]
        if keyword == "grid":
            w, d = _tokens(lineno, line, "grid", 2)
            width, depth = _int(lineno, w, "width"), _int(lineno, d, "depth")
            if width < 1 or depth < 1:
                raise ParseError(lineno, "grid dimensions must be positive")
        elif keyword == "camera":
            (camera,) = _tokens(lineno, line, "camera", 1)
        elif keyword == "infront":
            a, b = _tokens(lineno, line, "infront", 2)
            try:
                pair = (check_cell(lineno, parse_cell(a)), check_cell(lineno, parse_cell(b)))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
            if pair[0] == pair[1]:
                raise ParseError(lineno, "a cell cannot be in front of itself")
            infront.append(pair)
        elif keyword == "object":
            parts = line.split()
            if (
                len(parts) != 12
                or parts[2] != "cell"
                or parts[5] != "orient"
                or parts[7] != "shape"
                or parts[9] != "at"
            ):
                raise ParseError(
                    lineno,
                    "expected 'object <name> cell <x> <y> orient <o> shape <s> at <fx> <fy>'",
                )
            name = parts[1]
            if name in seen_names:
                raise ParseError(lineno, f"duplicate object name {name!r}")
            seen_names.add(name)
            cell = check_cell(
                lineno, Cell(_int(lineno, parts[3], "x"), _int(lineno, parts[4], "y"))
            )
            if cell in seen_cells:
                raise ParseError(lineno, f"two objects declared at {cell.name}")
            seen_cells.add(cell)
            try:
                orient = parse_orientation(parts[6])
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
            coords = (_float(lineno, parts[10], "fx"), _float(lineno, parts[11], "fy"))
            objects.append(PhysicalObject(name, cell, orient, parts[8], coords))
        elif keyword == "target":
            parts = line.split()
            if len(parts) != 5 or parts[2] != "near":
                raise ParseError(lineno, "expected 'target <name> near <fx> <fy>'")
            expected = f"obj{len(targets) + 1}"
            if parts[1] != expected:
                raise ParseError(lineno, f"targets must be named obj1..objN in order (expected {expected})")
            targets.append((parts[1], _float(lineno, parts[3], "fx"), _float(lineno, parts[4], "fy")))
        elif keyword == "goal":
            goal_literals.append(_parse_goal_literal(lineno, line.split(None, 1)[1] if " " in line else ""))
        elif keyword == "maxstep":
            (n,) = _tokens(lineno, line, "maxstep", 1)
            maxstep = _int(lineno, n, "maxstep")
            if maxstep < 0:
                raise ParseError(lineno, "maxstep must be non-negative")
        else:
            raise ParseError(lineno, f"unknown directive {keyword!r}")

    if width is None:
        raise ParseError(lines[0][0], "missing grid declaration")

    scene = SceneTruth(width, depth, tuple(objects), camera, tuple(infront))
    declared = {name for name, _, _ in targets} | {
        f"sco{i}" for i in range(1, len(objects) - len(targets) + 1)
    }
    for lit in goal_literals:
        for ref in _literal_objects(lit):
            if ref not in declared:
                raise ParseError(1, f"goal references undeclared object {ref!r}")
        for cell in _literal_cells(lit):
            if not (0 <= cell.x < width and 0 <= cell.y < depth):
                raise ParseError(1, f"goal references {cell.name} outside the grid")
    goal = Goal(tuple(goal_literals))
    task = TaskSpec(tuple(targets), goal)
    return scene, task, goal, maxstep


def _literal_objects(lit: FluentLiteral):
    if isinstance(lit, AtLiteral):
        yield lit.obj
        if not isinstance(lit.entity, Cell):
            yield lit.entity
    elif isinstance(lit, OriLiteral):
        yield lit.obj
    else:
        yield lit.obj
        if not isinstance(lit.base, Cell):
            yield lit.base


def _literal_cells(lit: FluentLiteral):
    if isinstance(lit, AtLiteral) and isinstance(lit.entity, Cell):
        yield lit.entity
    elif isinstance(lit, BelowLiteral) and isinstance(lit.base, Cell):
        yield lit.base


def parse_catalog(text: str) -> ShapeCatalog:
    """Parse a shape catalog; rules may only name already-declared shapes."""
    shapes: set[str] = set()
    unstable: list[StackRule] = []
    blockers: list[BlockerRule] = []

    def shape_or_wild(lineno: int, token: str) -> str | None:
        if token == "*":
            return None
        if token not in shapes:
            raise ParseError(lineno, f"undeclared shape {token!r}")
        return token

    def orient_or_wild(lineno: int, token: str):
        if token == "*":
            return None
        try:
            return parse_orientation(token)
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None

    for lineno, line in _content_lines(text):
        keyword = line.split()[0]
        if keyword == "shape":
            (name,) = _tokens(lineno, line, "shape", 1)
            shapes.add(name)
        elif keyword == "unstable":
            ts, to, bs, bo = _tokens(lineno, line, "unstable", 4)
            try:
                unstable.append(
                    StackRule(
                        shape_or_wild(lineno, ts),
                        orient_or_wild(lineno, to),
                        shape_or_wild(lineno, bs),
                        orient_or_wild(lineno, bo),
                    )
                )
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        elif keyword == "blocker":
            s, o = _tokens(lineno, line, "blocker", 2)
            if s not in shapes:
                raise ParseError(lineno, f"undeclared shape {s!r}")
            orient = orient_or_wild(lineno, o)
            if orient is None:
                raise ParseError(lineno, "blocker orientation cannot be a wildcard")
            blockers.append(BlockerRule(s, orient))
        else:
            raise ParseError(lineno, f"unknown directive {keyword!r}")
    try:
        return ShapeCatalog(frozenset(shapes), tuple(unstable), tuple(blockers))
    except UnknownShape as exc:  # pragma: no cover - guarded line by line above
        raise ParseError(1, str(exc)) from None


_PLAN_STEP = re.compile(r"(\d+)\s*:\s*move\((\w+)\s*,\s*(\w+)\s*,\s*(\w+)\)\.\Z")


def render_plan(plan: Plan) -> str:
    """One `<T>: move(obj,dest,orient).` line per step; empty plan is ''."""
    return "\n".join(
        f"{i}: move({a.obj},{entity_name(a.dest)},{a.orient})." for i, a in enumerate(plan)
    )


def parse_plan(text: str) -> Plan:
    """Inverse of render_plan; destinations may be cells or objects."""
    actions: list[MoveAction] = []
    for lineno, line in _content_lines(text):
        m = _PLAN_STEP.match(line)
        if m is None:
            raise ParseError(lineno, f"malformed plan step {line!r}")
        step = int(m.group(1))
        if step != len(actions):
            raise ParseError(lineno, f"expected step {len(actions)}, got {step}")
        try:
            actions.append(
                MoveAction(m.group(2), parse_entity(m.group(3)), parse_orientation(m.group(4)))
            )
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    return tuple(actions)


def load_instance(
    instance_path: str | Path,
    catalog_path: str | Path,
    maxstep_override: int | None = None,
) -> LoadedInstance:
    """Load and cross-validate an instance file plus its shape catalog."""
    instance_path = Path(instance_path)
    scene, task, _, maxstep = parse_instance(instance_path.read_text())
    catalog = parse_catalog(Path(catalog_path).read_text())
    for obj in scene.objects:
        if obj.shape not in catalog.shapes:
            raise ParseError(1, f"scene object {obj.label!r} has undeclared shape {obj.shape!r}")
    return LoadedInstance(
        name=instance_path.stem,
        scene=scene,
        task=task,
        maxstep=maxstep_override if maxstep_override is not None else maxstep,
        catalog=catalog,
    )


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package (e.g. 'instance1.txt')."""
    return Path(str(resources.files("tabletop").joinpath("data", name)))
