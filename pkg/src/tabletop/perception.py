"""Simulated two-phase perception with a query ledger.

The bottom-up pass names and localizes objects from a ground-truth scene
description: task targets are associated to the nearest physical objects,
everything else gets an automatic scene name.  The top-down pass answers
shape queries on demand, caching results and counting one query per
distinct object ever asked about.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import AssociationFailure, UnknownObject, UnknownPreset
from .geometry import OcclusionRelation, ShapeId
from .world import Cell, Goal, ObjectId, Orientation, State


@dataclass(frozen=True, slots=True)
class PhysicalObject:
    """Ground truth for one object on the table."""

    label: str
    cell: Cell
    orient: Orientation
    shape: ShapeId
    coords: tuple[float, float]


@dataclass(frozen=True)
class SceneTruth:
    width: int
    depth: int
    objects: tuple[PhysicalObject, ...]
    camera_preset: str = "none"
    extra_infront: tuple[tuple[Cell, Cell], ...] = ()


@dataclass(frozen=True)
class TaskSpec:
    """Named targets with the nominal coordinates they should be found near."""

    targets: tuple[tuple[ObjectId, float, float], ...]
    goal: Goal


@dataclass
class QueryLedger:
    queried: set[ObjectId] = field(default_factory=set)

    @property
    def count(self) -> int:
        return len(self.queried)


@dataclass
class PerceptView:
    """What perception has revealed: naming, poses, and queried shapes.

    Cells and orientations are free after the bottom-up pass; shapes are
    only available through `shape_of`, which charges the ledger once per
    distinct object.  One run context owns a view exclusively.
    """

    naming: dict[ObjectId, PhysicalObject]
    state: State
    shapes: dict[ObjectId, ShapeId] = field(default_factory=dict)
    ledger: QueryLedger = field(default_factory=QueryLedger)

    def shape_of(self, obj: ObjectId) -> ShapeId:
        if obj not in self.naming:
            raise UnknownObject(obj)
        if obj not in self.shapes:
            self.shapes[obj] = self.naming[obj].shape
            self.ledger.queried.add(obj)
        return self.shapes[obj]

    def known_shapes(self) -> dict[ObjectId, ShapeId]:
        """Shapes revealed so far; never triggers new queries."""
        return dict(self.shapes)

    def ground_truth(self) -> "GroundTruthShapes":
        return GroundTruthShapes(self.naming)


@dataclass(frozen=True)
class GroundTruthShapes:
    """Ledger-free shape access for grading and oracle use only."""

    naming: dict[ObjectId, PhysicalObject]

    def shape_of(self, obj: ObjectId) -> ShapeId:
        if obj not in self.naming:
            raise UnknownObject(obj)
        return self.naming[obj].shape


def _row_major(obj: PhysicalObject) -> tuple[int, int, str]:
    return (obj.cell.y, obj.cell.x, obj.label)


def bottom_up(
    scene: SceneTruth,
    task: TaskSpec,
    orientation_noise: float = 0.0,
    seed: int = 0,
) -> PerceptView:
    """Name and localize scene objects; reveal no shapes.

    Targets are associated greedily, in declaration order, to the nearest
    still-unassociated physical object (equidistant ties go to the object
    earlier in row-major cell order).  Leftover objects are named sco1,
    sco2, ... in row-major cell order.  `orientation_noise` optionally
    swaps each perceived orientation with that probability; it is off in
    all benchmark runs.
    """
    if len(task.targets) > len(scene.objects):
        raise AssociationFailure(
            f"{len(task.targets)} targets but only {len(scene.objects)} objects"
        )
    remaining = sorted(scene.objects, key=_row_major)
    naming: dict[ObjectId, PhysicalObject] = {}
    for name, fx, fy in task.targets:
        best = min(remaining, key=lambda o: (math.dist(o.coords, (fx, fy)), _row_major(o)))
        naming[name] = best
        remaining.remove(best)
    for i, obj in enumerate(remaining, start=1):
        naming[f"sco{i}"] = obj

    rng = random.Random(seed)
    at: dict[ObjectId, "Cell"] = {}
    ori: dict[ObjectId, Orientation] = {}
    for name, phys in naming.items():
        at[name] = phys.cell
        orient = phys.orient
        if orientation_noise and rng.random() < orientation_noise:
            orient = rng.choice([o for o in Orientation if o != orient])
        ori[name] = orient
    return PerceptView(naming=naming, state=State(at, ori))


_PRESETS = ("none", "depth")


def occlusion_of(scene: SceneTruth) -> OcclusionRelation:
    """Materialize the in-front relation from the scene's camera spec.

    The `depth` preset makes every cell occlude all cells behind it in
    the same column (larger y); explicit pairs are unioned in either way.
    """
    if scene.camera_preset not in _PRESETS:
        raise UnknownPreset(scene.camera_preset)
    pairs: set[tuple[Cell, Cell]] = set(scene.extra_infront)
    if scene.camera_preset == "depth":
        for x in range(scene.width):
            for y in range(scene.depth):
                for behind in range(y + 1, scene.depth):
                    pairs.add((Cell(x, y), Cell(x, behind)))
    return OcclusionRelation(scene.width, scene.depth, frozenset(pairs))
