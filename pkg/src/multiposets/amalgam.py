"""Binary diagrams, compatible cones, and the amalgam ``D`` built from a cone in C(s,m).

A binary diagram has one top object ``B`` repeated ``tops`` times and one
bottom object ``A`` repeated once per bottom vertex; every bottom vertex
sends exactly two arrows (embeddings ``A -> B``) into the top row.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .classes import ClassSpec, enumerate_class, is_member, is_member_csm, is_member_kbar
from .errors import MultiposetError
from .hom import Embedding, compose, enumerate_embeddings, is_embedding
from .order import (
    Relation,
    TemplateInfo,
    extends,
    is_linear_order,
    is_partial_order,
    linear_extension_fixed,
    transitive_closure,
)
from .structure import Multiposet


@dataclass(frozen=True)
class Arrow:
    top: int
    f: Embedding


@dataclass(frozen=True)
class BinaryDiagram:
    bottom: Multiposet
    top: Multiposet
    tops: int
    arrows: tuple[tuple[Arrow, Arrow], ...]

    def __post_init__(self) -> None:
        if self.tops < 1:
            raise MultiposetError("a binary diagram needs at least one top vertex")
        if self.bottom.slots != self.top.slots:
            raise MultiposetError("top and bottom objects have different signatures")
        for pair in self.arrows:
            if len(pair) != 2:
                raise MultiposetError("every bottom vertex carries exactly two arrows")
            for arrow in pair:
                if not 0 <= arrow.top < self.tops:
                    raise MultiposetError(f"top index {arrow.top} out of range")
                if not is_embedding(arrow.f, self.bottom, self.top):
                    raise MultiposetError("diagram arrow is not an embedding A -> B")

    @classmethod
    def build(
        cls,
        bottom: Multiposet,
        top: Multiposet,
        tops: int,
        arrows: Sequence[tuple[tuple[int, Sequence[int]], tuple[int, Sequence[int]]]],
    ) -> BinaryDiagram:
        return cls(
            bottom,
            top,
            tops,
            tuple((Arrow(g1, tuple(f1)), Arrow(g2, tuple(f2))) for (g1, f1), (g2, f2) in arrows),
        )


@dataclass(frozen=True)
class Cone:
    apex: Multiposet
    legs: tuple[Embedding, ...]


def compatibility_failures(d: BinaryDiagram, legs: Sequence[Embedding]) -> list[int]:
    """Indices of bottom vertices whose two paths into the apex disagree."""
    return [
        i for i, (left, right) in enumerate(d.arrows)
        if compose(legs[left.top], left.f) != compose(legs[right.top], right.f)
    ]


def is_compatible_cone(d: BinaryDiagram, cone: Cone, membership: ClassSpec) -> bool:
    if len(cone.legs) != d.tops:
        raise MultiposetError(f"cone has {len(cone.legs)} legs for {d.tops} top vertices")
    if cone.apex.slots != d.top.slots or not is_member(membership, cone.apex):
        return False
    if not all(len(e) == d.top.size and is_embedding(e, d.top, cone.apex) for e in cone.legs):
        return False
    return not compatibility_failures(d, cone.legs)


def find_cone_csm(d: BinaryDiagram, s: int, m: int, max_size: int) -> Cone | None:
    """First compatible cone in C(s,m) with apex size at most ``max_size``.

    Apexes are scanned by size then canonical order, leg tuples
    lexicographically.  ``None`` means no cone exists up to the bound, nothing more.
    """
    spec = ClassSpec.csm(s, m)
    if d.top.slots != 2 * s + m:
        raise MultiposetError("diagram signature does not match C(s,m)")
    # constraints between the legs of tops i < j, checked once both are chosen
    by_last: dict[int, list[tuple[Arrow, Arrow]]] = {}
    for left, right in d.arrows:
        by_last.setdefault(max(left.top, right.top), []).append((left, right))
    for size in range(d.top.size, max_size + 1):
        for apex in enumerate_class(spec, size):
            homs = enumerate_embeddings(d.top, apex)
            if not homs:
                continue
            legs: list[Embedding] = []

            def rec(i: int) -> bool:
                if i == d.tops:
                    return True
                for e in homs:
                    legs.append(e)
                    if all(
                        compose(legs[left.top], left.f) == compose(legs[right.top], right.f)
                        for left, right in by_last.get(i, ())
                    ) and rec(i + 1):
                        return True
                    legs.pop()
                return False

            if rec(0):
                return Cone(apex, tuple(legs))
    return None


@dataclass(frozen=True)
class Construction:
    d: Multiposet
    legs: tuple[Embedding, ...]
    ground: tuple[int, ...]
    """Apex element behind each element of ``d``."""


def construct_d(d: BinaryDiagram, cone: Cone, info: TemplateInfo) -> Construction:
    """Amalgam on the union of the leg images.

    Partial slots become the transitive closure of the union of the apex slot
    restricted to each image; linear slots are closed the same way and then
    sent through the fixed linear extension.
    """
    s = info.s
    if d.top.slots != info.slots:
        raise MultiposetError("diagram signature does not match the template")
    if not is_member_csm(s, info.m, cone.apex):
        raise MultiposetError("cone apex is not in C(s,m)")
    if not (is_member_kbar(info, d.top) and is_member_kbar(info, d.bottom)):
        raise MultiposetError("diagram objects are not in K̄(T)")
    if compatibility_failures(d, cone.legs) or not all(is_embedding(e, d.top, cone.apex) for e in cone.legs):
        raise MultiposetError("cone is not compatible over the diagram")

    ground = sorted({v for e in cone.legs for v in e})
    position = {v: i for i, v in enumerate(ground)}
    n = len(ground)
    images = [[position[v] for v in e] for e in cone.legs]
    relations = []
    for slot, apex_rel in enumerate(cone.apex.relations):
        restricted = apex_rel.restrict(ground)
        rows = [0] * n
        for img in images:
            mask = sum(1 << p for p in img)
            for p in img:
                rows[p] |= restricted.rows[p] & mask
        closed = transitive_closure(Relation(n, tuple(rows)))
        if not is_partial_order(closed):
            raise AssertionError("closure of apex restrictions is not a partial order")
        relations.append(closed if slot < s else linear_extension_fixed(closed))
    legs = tuple(tuple(img) for img in images)
    return Construction(Multiposet(n, tuple(relations)), legs, tuple(ground))


@dataclass
class Report:
    passed: bool = True
    failed_stage: str | None = None
    stages: list[tuple[str, bool, str]] = field(default_factory=list)

    def record(self, stage: str, ok: bool, detail: str = "") -> bool:
        self.stages.append((stage, ok, detail))
        if not ok and self.passed:
            self.passed = False
            self.failed_stage = stage
        return ok

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed_stage": self.failed_stage,
            "stages": [{"stage": s, "ok": ok, "detail": detail} for s, ok, detail in self.stages],
        }


def _mp_conditions(info: TemplateInfo, y: Multiposet) -> list[str]:
    """Names of the MP conditions ``y`` violates (empty if it is in K̄(T))."""
    if y.slots != info.slots:
        return [f"slot count {y.slots} != {info.slots}"]
    s = info.s
    leq = info.template.leq
    rels = y.relations
    failed = []
    if not (all(is_partial_order(r) for r in rels[:s]) and all(is_linear_order(r) for r in rels[s:])):
        failed.append("MP1")
    if any(leq(ia, ib) and not extends(rels[a], rels[b])
           for a, (ia, _) in enumerate(info.pairs) for b, (ib, _) in enumerate(info.pairs)):
        failed.append("MP2")
    if any(leq(ia, jb) and not extends(rels[a], rels[s + b])
           for a, (ia, _) in enumerate(info.pairs) for b, (_, jb) in enumerate(info.pairs)):
        failed.append("MP3")
    if any(ja == jb and rels[s + a] != rels[s + b]
           for a, (_, ja) in enumerate(info.pairs) for b, (_, jb) in enumerate(info.pairs)):
        failed.append("MP4")
    return failed


def verify_main_theorem_instance(d: BinaryDiagram, cone: Cone, info: TemplateInfo) -> Report:
    """Run the construction and check every claim about it, stopping at the first failure."""
    report = Report()
    s, m = info.s, info.m
    csm = ClassSpec.csm(s, m) if 2 * s + m == cone.apex.slots and s + m > 0 else None
    apex_ok = csm is not None and is_member(csm, cone.apex)
    if not report.record("compatibility:apex_in_csm", apex_ok, f"apex must lie in C({s},{m})"):
        return report
    if not report.record("compatibility:leg_count", len(cone.legs) == d.tops, f"{len(cone.legs)} legs, {d.tops} tops"):
        return report
    bad_legs = [i for i, e in enumerate(cone.legs)
                if len(e) != d.top.size or not is_embedding(e, d.top, cone.apex)]
    if not report.record("compatibility:legs_embed", not bad_legs, f"non-embedding legs: {bad_legs}"):
        return report
    bad = compatibility_failures(d, cone.legs)
    if not report.record("compatibility:equations", not bad, f"failing bottom vertices: {bad}"):
        return report
    for name, obj in (("top", d.top), ("bottom", d.bottom)):
        failed = _mp_conditions(info, obj)
        if not report.record(f"mp_check:{name}", not failed, ", ".join(failed)):
            return report

    built = construct_d(d, cone, info)
    failed = _mp_conditions(info, built.d)
    if not report.record("mp_check:amalgam", not failed, ", ".join(failed)):
        return report
    bad_legs = [i for i, f in enumerate(built.legs) if not is_embedding(f, d.top, built.d)]
    if not report.record("amalgam_legs_embed", not bad_legs, f"non-embedding legs: {bad_legs}"):
        return report
    bad = compatibility_failures(d, built.legs)
    if not report.record("amalgam_compatibility", not bad, f"failing bottom vertices: {bad}"):
        return report
    apex_on_ground = [r.restrict(built.ground) for r in cone.apex.relations]
    over = [slot for slot in range(s) if not extends(built.d.relations[slot], apex_on_ground[slot])]
    if not report.record("partial_slots_within_apex", not over, f"slots: {over}"):
        return report
    changed = []
    for i, img in enumerate(built.legs):
        for slot, (dr, ar) in enumerate(zip(built.d.relations, apex_on_ground)):
            if dr.restrict(img) != ar.restrict(img):
                changed.append((i, slot))
    if not report.record("restrictions_preserved", not changed, f"(leg, slot): {changed}"):
        return report
    twins = [(a, b) for a, (_, ja) in enumerate(info.pairs) for b, (_, jb) in enumerate(info.pairs)
             if a < b and ja == jb and built.d.relations[s + a] != built.d.relations[s + b]]
    report.record("shared_linear_slots_identical", not twins, f"pairs: {twins}")
    return report


def generate_diagram_from_cone(
    apex: Multiposet,
    b: Multiposet,
    a: Multiposet,
    seed: int,
    tops: int = 3,
    bottoms: int = 4,
    attempts: int = 50,
) -> tuple[BinaryDiagram, Cone]:
    """Random binary diagram together with a cone over it, compatible by construction.

    Legs are drawn from ``hom(b, apex)``.  For each bottom vertex two legs are
    drawn and the arrow pair is chosen among ``(f1, f2)`` with
    ``e1 ∘ f1 == e2 ∘ f2``.
    """
    rng = random.Random(seed)
    homs_b = enumerate_embeddings(b, apex)
    homs_a = enumerate_embeddings(a, b)
    if not homs_b or not homs_a:
        raise MultiposetError("hom(B, C) and hom(A, B) must be nonempty")
    legs = tuple(rng.choice(homs_b) for _ in range(tops))
    arrows: list[tuple[Arrow, Arrow]] = []
    for _ in range(bottoms):
        for _ in range(attempts):
            g1, g2 = rng.randrange(tops), rng.randrange(tops)
            via = {}
            for f in homs_a:
                via.setdefault(compose(legs[g1], f), []).append(f)
            pairs = [(f1, f2) for f2 in homs_a for f1 in via.get(compose(legs[g2], f2), ())]
            if pairs:
                f1, f2 = rng.choice(pairs)
                arrows.append((Arrow(g1, f1), Arrow(g2, f2)))
                break
        else:
            raise MultiposetError("no compatible arrow pair found for the sampled legs")
    return BinaryDiagram(a, b, tops, tuple(arrows)), Cone(apex, legs)
