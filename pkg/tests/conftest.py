"""Shared fixtures: bundled instances and a random small-instance generator."""

from __future__ import annotations

import random

import pytest

from tabletop.formats import bundled_path, load_instance, parse_catalog
from tabletop.perception import PhysicalObject, SceneTruth, TaskSpec
from tabletop.strategies import LoadedInstance
from tabletop.world import (
    AtLiteral,
    BelowLiteral,
    Cell,
    Goal,
    ORIENTATIONS,
    OriLiteral,
)

SHAPES = ("bolt_m20_100", "aluprofil_f20_100_gray", "nut_m20")


@pytest.fixture(scope="session")
def catalog():
    return parse_catalog(bundled_path("catalog.txt").read_text())


@pytest.fixture(scope="session")
def instance1():
    return load_instance(bundled_path("instance1.txt"), bundled_path("catalog.txt"))


@pytest.fixture(scope="session")
def instance2():
    return load_instance(bundled_path("instance2.txt"), bundled_path("catalog.txt"))


@pytest.fixture(scope="session")
def instance3():
    return load_instance(bundled_path("instance3.txt"), bundled_path("catalog.txt"))


@pytest.fixture(scope="session")
def instances(instance1, instance2, instance3):
    return [instance1, instance2, instance3]


def random_instance(rng: random.Random, catalog) -> LoadedInstance:
    """A small random instance within grid <= 3x2, <= 3 objects, maxstep <= 3.

    Target coordinates coincide with their objects' coordinates, so the
    bottom-up association is unambiguous.  Horizons shrink with object
    count to keep exhaustive oracles cheap.
    """
    width = rng.choice((2, 3))
    depth = rng.choice((1, 2))
    n_cells = width * depth
    n_objects = rng.randint(1, min(3, n_cells))
    cells = rng.sample([Cell(x, y) for x in range(width) for y in range(depth)], n_objects)
    physicals = tuple(
        PhysicalObject(
            label=f"phys{i}",
            cell=cell,
            orient=rng.choice(ORIENTATIONS),
            shape=rng.choice(SHAPES),
            coords=(cell.x * 1.0, cell.y * 1.0),
        )
        for i, cell in enumerate(cells)
    )
    n_targets = rng.randint(1, n_objects)
    targets = tuple(
        (f"obj{i + 1}", physicals[i].coords[0], physicals[i].coords[1])
        for i in range(n_targets)
    )
    names = [f"obj{i + 1}" for i in range(n_targets)]
    leftovers = sorted(physicals[n_targets:], key=lambda p: (p.cell.y, p.cell.x))
    names += [f"sco{i + 1}" for i in range(len(leftovers))]

    grid_cells = [Cell(x, y) for x in range(width) for y in range(depth)]
    literals = []
    for _ in range(rng.randint(1, 2)):
        kind = rng.choice(("below", "below", "at", "ori"))
        obj = rng.choice(names)
        if kind == "below":
            others = [n for n in names if n != obj]
            if others and rng.random() < 0.25:
                literals.append(BelowLiteral(rng.choice(others), obj))
            else:
                literals.append(BelowLiteral(rng.choice(grid_cells), obj))
        elif kind == "at":
            literals.append(AtLiteral(obj, rng.choice(grid_cells)))
        else:
            literals.append(OriLiteral(obj, rng.choice(ORIENTATIONS)))

    scene = SceneTruth(
        width,
        depth,
        physicals,
        camera_preset=rng.choice(("depth", "depth", "none")),
    )
    maxstep = rng.randint(1, 3 if n_objects <= 2 else 2)
    return LoadedInstance(
        name=f"rand_{width}x{depth}_{n_objects}",
        scene=scene,
        task=TaskSpec(targets, Goal(tuple(literals))),
        maxstep=maxstep,
        catalog=catalog,
    )
