"""Bottom-up naming/association, shape query ledger, occlusion presets."""

import pytest

from tabletop.errors import AssociationFailure, UnknownObject, UnknownPreset
from tabletop.perception import (
    PhysicalObject,
    SceneTruth,
    TaskSpec,
    bottom_up,
    occlusion_of,
)
from tabletop.world import Cell, Goal, Orientation


def scene_with(objects, preset="none", extra=()):
    return SceneTruth(5, 3, tuple(objects), preset, tuple(extra))


def phys(label, x, y, shape="nut_m20", orient=Orientation.VERT):
    return PhysicalObject(label, Cell(x, y), orient, shape, (x * 0.1, y * 0.1))


class TestBottomUp:
    def test_nearest_association_and_sco_naming(self, instance1):
        view = instance1.fresh_view()
        assert view.naming["obj1"].shape == "nut_m20"
        assert view.naming["sco1"].cell == Cell(0, 0)
        assert view.naming["sco2"].cell == Cell(4, 0)
        assert view.ledger.count == 0
        assert view.shapes == {}

    def test_exact_target_count_leaves_no_scene_names(self):
        scene = scene_with([phys("a", 0, 0), phys("b", 2, 1)])
        task = TaskSpec((("obj1", 0.0, 0.0), ("obj2", 0.2, 0.1)), Goal(()))
        view = bottom_up(scene, task)
        assert sorted(view.naming) == ["obj1", "obj2"]

    def test_equidistant_tie_breaks_row_major(self):
        # Both candidates are 0.1 away; (1,0) precedes (0,1) in (y, x) order.
        scene = scene_with([phys("right", 1, 0), phys("back", 0, 1)])
        task = TaskSpec((("obj1", 0.0, 0.0),), Goal(()))
        view = bottom_up(scene, task)
        assert view.naming["obj1"].label == "right"
        assert view.naming["sco1"].label == "back"

    def test_sco_numbering_is_row_major(self):
        scene = scene_with([phys("c", 0, 1), phys("a", 1, 0), phys("b", 3, 0)])
        task = TaskSpec((), Goal(()))
        view = bottom_up(scene, task)
        assert [view.naming[f"sco{i}"].label for i in (1, 2, 3)] == ["a", "b", "c"]

    def test_more_targets_than_objects(self):
        scene = scene_with([phys("a", 0, 0)])
        task = TaskSpec((("obj1", 0.0, 0.0), ("obj2", 0.1, 0.0)), Goal(()))
        with pytest.raises(AssociationFailure):
            bottom_up(scene, task)

    def test_deterministic(self, instance3):
        v1 = instance3.fresh_view()
        v2 = instance3.fresh_view()
        assert {k: p.label for k, p in v1.naming.items()} == {
            k: p.label for k, p in v2.naming.items()
        }
        assert v1.state == v2.state

    def test_orientation_noise_is_seeded_and_off_by_default(self, instance1):
        clean = bottom_up(instance1.scene, instance1.task)
        assert clean.state.ori["sco1"] == Orientation.VERT
        noisy_a = bottom_up(instance1.scene, instance1.task, orientation_noise=1.0, seed=4)
        noisy_b = bottom_up(instance1.scene, instance1.task, orientation_noise=1.0, seed=4)
        assert noisy_a.state.ori == noisy_b.state.ori
        assert any(noisy_a.state.ori[o] != clean.state.ori[o] for o in clean.state.ori)


class TestShapeQueries:
    def test_first_query_charges_ledger(self, instance1):
        view = instance1.fresh_view()
        assert view.shape_of("sco1") == "bolt_m20_100"
        assert view.ledger.count == 1
        assert view.ledger.queried == {"sco1"}

    def test_repeat_query_is_cached(self, instance1):
        view = instance1.fresh_view()
        view.shape_of("sco2")
        view.shape_of("sco2")
        assert view.shape_of("sco2") == "bolt_m20_100"
        assert view.ledger.count == 1

    def test_querying_everything_counts_each_object_once(self, instance3):
        view = instance3.fresh_view()
        for obj in sorted(view.naming):
            view.shape_of(obj)
            view.shape_of(obj)
        assert view.ledger.count == 4

    def test_unknown_object(self, instance1):
        with pytest.raises(UnknownObject):
            instance1.fresh_view().shape_of("nobody")

    def test_ground_truth_access_skips_ledger(self, instance1):
        view = instance1.fresh_view()
        truth = view.ground_truth()
        assert truth.shape_of("sco1") == "bolt_m20_100"
        assert view.ledger.count == 0

    def test_ledger_counts_distinct_objects_for_any_sequence(self, instance3):
        view = instance3.fresh_view()
        for obj in ("obj1", "obj1", "sco1", "obj1", "sco1", "obj2"):
            view.shape_of(obj)
        assert view.ledger.count == 3
        assert view.ledger.queried == {"obj1", "obj2", "sco1"}


class TestOcclusion:
    def test_depth_preset_relates_column_cells(self, instance3):
        occl = occlusion_of(instance3.scene)
        assert occl.blocks(Cell(3, 1), Cell(3, 2))
        assert occl.blocks(Cell(0, 0), Cell(0, 2))
        assert not occl.blocks(Cell(3, 2), Cell(3, 1))
        assert not occl.blocks(Cell(0, 0), Cell(1, 0))

    def test_none_preset_is_empty(self):
        occl = occlusion_of(scene_with([], preset="none"))
        assert occl.pairs == frozenset()

    def test_explicit_pairs_union_with_preset(self):
        extra = ((Cell(0, 0), Cell(1, 0)),)
        occl = occlusion_of(scene_with([], preset="none", extra=extra))
        assert occl.blocks(Cell(0, 0), Cell(1, 0))
        occl_depth = occlusion_of(scene_with([], preset="depth", extra=extra))
        assert occl_depth.blocks(Cell(0, 0), Cell(1, 0))
        assert occl_depth.blocks(Cell(0, 0), Cell(0, 1))

    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            occlusion_of(scene_with([], preset="fisheye"))
