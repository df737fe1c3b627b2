import dataclasses

import pytest

from multiposets.amalgam import (
    BinaryDiagram,
    Cone,
    compatibility_failures,
    construct_d,
    find_cone_csm,
    generate_diagram_from_cone,
    is_compatible_cone,
    verify_main_theorem_instance,
)
from multiposets.canon import is_isomorphic
from multiposets.classes import ClassSpec, is_member_csm, is_member_kbar
from multiposets.errors import MultiposetError
from multiposets.generate import cone_first_instance
from multiposets.hom import is_embedding
from multiposets.order import Relation, extends, validate_template
from multiposets.presets import preset_template
from multiposets.structure import Multiposet, chain, point

INFO_B = validate_template(preset_template("b"))
INFO_C = validate_template(preset_template("c"))
INFO_E3 = validate_template(preset_template("e:3"))


def two_overlapping_legs(apex):
    """Two copies of a 2-chain sent to {0,1} and {1,2}, glued along apex element 1."""
    d = BinaryDiagram.build(point(2), chain(2, 2), 2, [((0, (1,)), (1, (0,)))])
    return d, Cone(apex, ((0, 1), (1, 2)))


def test_diagram_validation():
    with pytest.raises(MultiposetError):
        BinaryDiagram.build(point(2), chain(2, 2), 1, [((0, (0,)), (1, (0,)))])
    with pytest.raises(MultiposetError):
        BinaryDiagram.build(point(2), chain(2, 2), 0, [])
    anti = Multiposet(2, (Relation.diagonal(2),) * 2)
    with pytest.raises(MultiposetError):
        BinaryDiagram.build(anti, chain(2, 2), 1, [((0, (0, 1)), (0, (0, 1)))])


def test_compatibility_examples():
    d, cone = two_overlapping_legs(chain(3, 2))
    assert compatibility_failures(d, cone.legs) == []
    assert is_compatible_cone(d, cone, ClassSpec.csm(1, 0))
    assert compatibility_failures(d, ((0, 1), (0, 2))) == [0]
    with pytest.raises(MultiposetError):
        is_compatible_cone(d, Cone(cone.apex, cone.legs[:1]), ClassSpec.csm(1, 0))


def test_single_top_gives_a_copy_of_b():
    for info, seed in ((INFO_B, 1), (INFO_C, 2), (INFO_E3, 3)):
        for offset in range(10):
            diagram, cone = cone_first_instance(info, seed * 100 + offset, max_tops=1)
            built = construct_d(diagram, cone, info)
            assert is_isomorphic(built.d, diagram.top)


def test_closure_adds_pairs_across_legs():
    d, cone = two_overlapping_legs(chain(3, 2))
    built = construct_d(d, cone, INFO_B)
    assert built.ground == (0, 1, 2)
    assert built.d == chain(3, 2)
    assert (0, 2) in built.d.relations[0]
    assert verify_main_theorem_instance(d, cone, INFO_B).passed


def test_partial_slot_can_shrink_below_apex():
    apex = Multiposet(3, (Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 2)]), Relation.chain([0, 1, 2])))
    assert is_member_csm(1, 0, apex)
    top = Multiposet(2, (Relation.diagonal(2), Relation.chain([0, 1])))
    d = BinaryDiagram.build(point(2), top, 2, [((0, (1,)), (1, (0,)))])
    cone = Cone(apex, ((0, 1), (1, 2)))
    built = construct_d(d, cone, INFO_B)
    assert built.d.relations[0] == Relation.diagonal(3)
    assert built.d.relations[1] == Relation.chain([0, 1, 2])
    assert is_member_kbar(INFO_B, built.d)
    report = verify_main_theorem_instance(d, cone, INFO_B)
    assert report.passed and report.failed_stage is None


def test_ground_is_union_of_images():
    apex = chain(5, 2)
    d = BinaryDiagram.build(point(2), chain(2, 2), 2, [((0, (1,)), (1, (0,)))])
    built = construct_d(d, Cone(apex, ((0, 2), (2, 4))), INFO_B)
    assert built.ground == (0, 2, 4)
    assert built.legs == ((0, 1), (1, 2))


def test_find_cone_golden():
    # two 2-chains sharing their bottom element; the smallest cone reuses one copy
    d = BinaryDiagram.build(point(2), chain(2, 2), 2, [((0, (0,)), (1, (0,)))])
    cone = find_cone_csm(d, 1, 0, 3)
    assert cone is not None
    assert cone.apex.size == 2
    assert cone.legs[0] == cone.legs[1]
    assert is_compatible_cone(d, cone, ClassSpec.csm(1, 0))


def test_find_cone_distinct_tops_need_more_room():
    # glue the top of copy 0 to the bottom of copy 1: the apex must be a 3-chain
    d = BinaryDiagram.build(point(2), chain(2, 2), 2, [((0, (1,)), (1, (0,)))])
    cone = find_cone_csm(d, 1, 0, 4)
    assert cone.apex.size == 3
    assert is_compatible_cone(d, cone, ClassSpec.csm(1, 0))
    assert find_cone_csm(d, 1, 0, 2) is None


def test_find_cone_adversarial_returns_none():
    # both endpoints of one chain would have to hit the same apex element
    d = BinaryDiagram.build(point(), chain(2), 1, [((0, (0,)), (0, (1,)))])
    assert find_cone_csm(d, 0, 1, 4) is None
    with pytest.raises(MultiposetError):
        find_cone_csm(d, 1, 0, 4)


def test_cone_first_instances_pass():
    for info in (INFO_B, INFO_C, INFO_E3):
        for seed in range(15):
            diagram, cone = cone_first_instance(info, seed)
            report = verify_main_theorem_instance(diagram, cone, info)
            assert report.passed, report.as_dict()
            built = construct_d(diagram, cone, info)
            assert built.d.size <= cone.apex.size
            for slot in range(info.s):
                assert extends(built.d.relations[slot], cone.apex.relations[slot].restrict(built.ground))
            assert all(is_embedding(f, diagram.top, built.d) for f in built.legs)


def test_generator_is_deterministic():
    for info in (INFO_B, INFO_E3):
        assert cone_first_instance(info, 17) == cone_first_instance(info, 17)
    apex = chain(4, 2)
    assert generate_diagram_from_cone(apex, chain(2, 2), point(2), 5) == \
        generate_diagram_from_cone(apex, chain(2, 2), point(2), 5)


def test_tampered_leg_fails_compatibility():
    failures = 0
    for seed in range(30):
        diagram, cone = cone_first_instance(INFO_C, seed, max_tops=3)
        if not diagram.arrows:
            continue
        left, right = diagram.arrows[0]
        if left.top == right.top:
            continue
        leg = cone.legs[left.top]
        others = [v for v in range(cone.apex.size) if v not in leg]
        if not others:
            continue
        bad = list(cone.legs)
        moved = list(leg)
        moved[left.f[0]] = others[0]
        bad[left.top] = tuple(moved)
        report = verify_main_theorem_instance(diagram, Cone(cone.apex, tuple(bad)), INFO_C)
        assert not report.passed
        assert report.failed_stage.startswith("compatibility")
        failures += 1
    assert failures >= 10


def test_apex_outside_csm_is_reported():
    d, cone = two_overlapping_legs(chain(3, 2))
    flipped = Multiposet(3, (Relation.chain([0, 1, 2]), Relation.chain([2, 1, 0])))
    report = verify_main_theorem_instance(d, Cone(flipped, cone.legs), INFO_B)
    assert report.failed_stage == "compatibility:apex_in_csm"
    with pytest.raises(MultiposetError):
        construct_d(d, Cone(flipped, cone.legs), INFO_B)


def test_tampered_pairs_fail_an_mp_check():
    # claim both pairs of e:3 share one maximal element, so their linear slots must agree
    lying = dataclasses.replace(INFO_E3, pairs=((1, 3), (2, 3)))
    caught = 0
    for seed in range(30):
        diagram, cone = cone_first_instance(INFO_E3, seed)
        assert verify_main_theorem_instance(diagram, cone, INFO_E3).passed
        report = verify_main_theorem_instance(diagram, cone, lying)
        if diagram.top.relations[2] != diagram.top.relations[3]:
            assert report.failed_stage == "mp_check:top"
            assert "MP4" in report.stages[-1][2]
            caught += 1
        elif not report.passed:
            assert report.failed_stage.startswith("mp_check")
    assert caught


def test_report_as_dict():
    d, cone = two_overlapping_legs(chain(3, 2))
    out = verify_main_theorem_instance(d, cone, INFO_B).as_dict()
    assert out["passed"] and out["failed_stage"] is None
    assert [s["stage"] for s in out["stages"]][:2] == ["compatibility:apex_in_csm", "compatibility:leg_count"]
    assert out["stages"][-1]["stage"] == "shared_linear_slots_identical"
