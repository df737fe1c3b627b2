"""Classes of multiposets: membership, the doubled-slot translation, products, enumeration.

Supported classes:

* ``K``      -- multiposets conforming to a template (one slot per template element);
* ``KBAR``   -- the same objects re-signatured as ``(≤_{i_1..i_s}, ≤_{j_1..j_s}, ≤_{k_1..k_m})``;
* ``CSM``    -- ``s`` (partial order, linear extension) pairs followed by ``m`` free linear orders;
* ``CH``     -- finite chains;
* ``EPOS``   -- posets with a linear extension;
* ``PRODUCT``-- structures whose reducts to disjoint slot groups lie in given classes;
* ``CUSTOM`` -- a base class filtered by an extra predicate (used for negative controls).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .canon import canonical_form
from .errors import BoundExceeded, MultiposetError
from .order import (
    Relation,
    Template,
    TemplateInfo,
    extends,
    is_linear_order,
    is_partial_order,
    transitive_closure,
    validate_template,
)
from .structure import Multiposet, reduct

ENUMERATION_BOUND = 7

LINEAR = "linear"
PARTIAL = "partial"


class Kind(str, enum.Enum):
    K = "K"
    KBAR = "KBAR"
    CSM = "CSM"
    CH = "CH"
    EPOS = "EPOS"
    PRODUCT = "PRODUCT"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class ClassSpec:
    kind: Kind
    template: Template | None = None
    s: int | None = None
    m: int | None = None
    factors: tuple[tuple[tuple[int, ...], ClassSpec], ...] = ()
    base: ClassSpec | None = None
    predicate: Callable[[Multiposet], bool] | None = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self) -> None:
        kind = self.kind
        if kind in (Kind.K, Kind.KBAR) and self.template is None:
            raise MultiposetError(f"{kind.value} needs a template")
        if kind is Kind.CSM and (self.s is None or self.m is None or self.s < 0 or self.m < 0 or self.s + self.m == 0):
            raise MultiposetError("C(s,m) needs non-negative s, m with s + m >= 1")
        if kind is Kind.CUSTOM and (self.base is None or self.predicate is None):
            raise MultiposetError("a custom class needs a base class and a predicate")
        if kind is Kind.PRODUCT:
            if not self.factors:
                raise MultiposetError("a product needs at least one factor")
            seen: list[int] = []
            for slots, factor in self.factors:
                if len(slots) != slot_count(factor):
                    raise MultiposetError("factor slot set does not match the factor's signature")
                seen.extend(slots)
            if sorted(seen) != list(range(len(seen))):
                raise MultiposetError("factor slot sets must be disjoint and cover all slots")

    @classmethod
    def k(cls, template: Template) -> ClassSpec:
        return cls(Kind.K, template=template)

    @classmethod
    def kbar(cls, template: Template) -> ClassSpec:
        return cls(Kind.KBAR, template=template)

    @classmethod
    def csm(cls, s: int, m: int) -> ClassSpec:
        return cls(Kind.CSM, s=s, m=m)

    @classmethod
    def ch(cls) -> ClassSpec:
        return cls(Kind.CH)

    @classmethod
    def epos(cls) -> ClassSpec:
        return cls(Kind.EPOS)

    @classmethod
    def product(cls, factors: Sequence[tuple[Sequence[int], ClassSpec]]) -> ClassSpec:
        return cls(Kind.PRODUCT, factors=tuple((tuple(slots), spec) for slots, spec in factors))

    @classmethod
    def custom(cls, base: ClassSpec, predicate: Callable[[Multiposet], bool], name: str) -> ClassSpec:
        return cls(Kind.CUSTOM, base=base, predicate=predicate, name=name)

    def info(self) -> TemplateInfo:
        if self.template is None:
            raise MultiposetError(f"{self.kind.value} has no template")
        return _info(self.template)

    def __str__(self) -> str:
        if self.kind is Kind.CSM:
            return f"C({self.s},{self.m})"
        if self.kind in (Kind.K, Kind.KBAR):
            return f"{self.kind.value}(t={self.template.t}, {self.template.pairs()})"
        if self.kind is Kind.PRODUCT:
            return " ⊗ ".join(f"{spec}{list(slots)}" for slots, spec in self.factors)
        if self.kind is Kind.CUSTOM:
            return self.name or f"custom({self.base})"
        return self.kind.value


@lru_cache(maxsize=None)
def _info(template: Template) -> TemplateInfo:
    return validate_template(template)


def csm_as_product(s: int, m: int) -> ClassSpec:
    """C(s,m) written as s copies of EPos on slots (α, s+α) times m chains on slots 2s+β."""
    factors: list[tuple[Sequence[int], ClassSpec]] = [((a, s + a), ClassSpec.epos()) for a in range(s)]
    factors += [((2 * s + b,), ClassSpec.ch()) for b in range(m)]
    return ClassSpec.product(factors)


def slot_count(spec: ClassSpec) -> int:
    kind = spec.kind
    if kind is Kind.K:
        return spec.template.t
    if kind is Kind.KBAR:
        return spec.info().slots
    if kind is Kind.CSM:
        return 2 * spec.s + spec.m
    if kind is Kind.CH:
        return 1
    if kind is Kind.EPOS:
        return 2
    if kind is Kind.PRODUCT:
        return sum(len(slots) for slots, _ in spec.factors)
    return slot_count(spec.base)


def slot_kinds(spec: ClassSpec) -> tuple[str, ...]:
    """Which slots must be linear and which only partial orders."""
    kind = spec.kind
    if kind is Kind.K:
        info = spec.info()
        return tuple(LINEAR if i in info.maximal else PARTIAL for i in range(1, spec.template.t + 1))
    if kind in (Kind.KBAR, Kind.CSM):
        s, m = _sm(spec)
        return (PARTIAL,) * s + (LINEAR,) * (s + m)
    if kind is Kind.CH:
        return (LINEAR,)
    if kind is Kind.EPOS:
        return (PARTIAL, LINEAR)
    if kind is Kind.PRODUCT:
        out = [PARTIAL] * slot_count(spec)
        for slots, factor in spec.factors:
            for slot, k in zip(slots, slot_kinds(factor)):
                out[slot] = k
        return tuple(out)
    return slot_kinds(spec.base)


def inclusions(spec: ClassSpec) -> tuple[tuple[int, int], ...]:
    """Slot pairs ``(p, q)`` whose relations must satisfy ``slot p ⊆ slot q``."""
    kind = spec.kind
    if kind is Kind.K:
        return tuple((i - 1, j - 1) for i, j in spec.template.pairs())
    if kind is Kind.KBAR:
        info = spec.info()
        leq = info.template.leq
        s = info.s
        out = []
        for a, (ia, _) in enumerate(info.pairs):
            for b, (ib, jb) in enumerate(info.pairs):
                if a != b and leq(ia, ib):
                    out.append((a, b))
                if leq(ia, jb):
                    out.append((a, s + b))
        for a, (_, ja) in enumerate(info.pairs):
            for b, (_, jb) in enumerate(info.pairs):
                if a != b and ja == jb:
                    out.append((s + a, s + b))
        return tuple(out)
    if kind is Kind.CSM:
        return tuple((a, spec.s + a) for a in range(spec.s))
    if kind is Kind.EPOS:
        return ((0, 1),)
    if kind is Kind.PRODUCT:
        out = []
        for slots, factor in spec.factors:
            out.extend((slots[p], slots[q]) for p, q in inclusions(factor))
        return tuple(out)
    if kind is Kind.CUSTOM:
        return inclusions(spec.base)
    return ()


def _sm(spec: ClassSpec) -> tuple[int, int]:
    if spec.kind is Kind.CSM:
        return spec.s, spec.m
    info = spec.info()
    return info.s, info.m


def _check_slots(x: Multiposet, expected: int) -> None:
    if x.slots != expected:
        raise MultiposetError(f"expected {expected} relations, got {x.slots}")


def _conforms(x: Multiposet, kinds: Sequence[str], incl: Sequence[tuple[int, int]]) -> bool:
    for rel, k in zip(x.relations, kinds):
        if not (is_linear_order(rel) if k == LINEAR else is_partial_order(rel)):
            return False
    return all(extends(x.relations[p], x.relations[q]) for p, q in incl)


def is_member_k(template: Template, x: Multiposet) -> bool:
    """Partial orders in every slot, linear at maximal elements, ``≤_i ⊆ ≤_j`` when ``i ≼ j``."""
    _check_slots(x, template.t)
    spec = ClassSpec.k(template)
    return _conforms(x, slot_kinds(spec), inclusions(spec))


def is_member_kbar(info: TemplateInfo, y: Multiposet) -> bool:
    """MP1-MP4 for the doubled-slot layout described by ``info``."""
    _check_slots(y, info.slots)
    s = info.s
    leq = info.template.leq
    rels = y.relations
    # MP1
    if not all(is_partial_order(r) for r in rels[:s]):
        return False
    if not all(is_linear_order(r) for r in rels[s:]):
        return False
    for a, (ia, ja) in enumerate(info.pairs):
        for b, (ib, jb) in enumerate(info.pairs):
            # MP2
            if leq(ia, ib) and not extends(rels[a], rels[b]):
                return False
            # MP3
            if leq(ia, jb) and not extends(rels[a], rels[s + b]):
                return False
            # MP4
            if ja == jb and rels[s + a] != rels[s + b]:
                return False
    return True


def is_member_csm(s: int, m: int, y: Multiposet) -> bool:
    _check_slots(y, 2 * s + m)
    rels = y.relations
    if not all(is_partial_order(r) for r in rels[:s]):
        return False
    if not all(is_linear_order(r) for r in rels[s:]):
        return False
    return all(extends(rels[a], rels[s + a]) for a in range(s))


def product_membership(spec: ClassSpec, y: Multiposet) -> bool:
    if spec.kind is not Kind.PRODUCT:
        raise MultiposetError("product_membership needs a PRODUCT class")
    _check_slots(y, slot_count(spec))
    return all(is_member(factor, reduct(y, slots)) for slots, factor in spec.factors)


def is_member(spec: ClassSpec, x: Multiposet) -> bool:
    kind = spec.kind
    if kind is Kind.K:
        return is_member_k(spec.template, x)
    if kind is Kind.KBAR:
        return is_member_kbar(spec.info(), x)
    if kind is Kind.CSM:
        return is_member_csm(spec.s, spec.m, x)
    if kind is Kind.CH:
        _check_slots(x, 1)
        return is_linear_order(x.relations[0])
    if kind is Kind.EPOS:
        _check_slots(x, 2)
        p, lin = x.relations
        return is_partial_order(p) and is_linear_order(lin) and extends(p, lin)
    if kind is Kind.PRODUCT:
        return product_membership(spec, x)
    return is_member(spec.base, x) and bool(spec.predicate(x))


def _translate_layout(info: TemplateInfo) -> list[int]:
    """Template element (1-based) feeding each slot of the doubled layout."""
    return [i for i, _ in info.pairs] + [j for _, j in info.pairs] + list(info.isolated)


def bar_translate(template: Template, x: Multiposet) -> Multiposet:
    if not is_member_k(template, x):
        raise MultiposetError("bar_translate needs a member of K(T)")
    info = _info(template)
    return Multiposet(x.size, tuple(x.relations[e - 1] for e in _translate_layout(info)))


def bar_untranslate(template: Template, y: Multiposet) -> Multiposet:
    info = _info(template)
    if not is_member_kbar(info, y):
        raise MultiposetError("bar_untranslate needs a member of K̄(T)")
    source: dict[int, int] = {}
    for slot, e in enumerate(_translate_layout(info)):
        source.setdefault(e, slot)
    return Multiposet(y.size, tuple(y.relations[source[e]] for e in range(1, template.t + 1)))


# -- enumeration ------------------------------------------------------------


def linear_orders_between(forced: Relation, allowed: Relation) -> Iterator[Relation]:
    """All linear orders ``L`` with ``forced ⊆ L ⊆ allowed``, in lexicographic sequence order."""
    n = forced.n
    full = (1 << n) - 1
    # below[x]: elements forced strictly below x
    below = [0] * n
    for a, row in enumerate(forced.rows):
        rest = row & ~(1 << a)
        while rest:
            low = rest & -rest
            below[low.bit_length() - 1] |= 1 << a
            rest ^= low
    seq: list[int] = []

    def rec(remaining: int) -> Iterator[Relation]:
        if not remaining:
            yield Relation.chain(seq)
            return
        for x in range(n):
            if not remaining >> x & 1 or below[x] & remaining:
                continue
            if allowed.rows[x] & remaining != remaining:
                continue
            seq.append(x)
            yield from rec(remaining & ~(1 << x))
            seq.pop()

    yield from rec(full)


def partial_orders_between(forced: Relation, allowed: Relation) -> Iterator[Relation]:
    """All partial orders ``P`` with ``forced ⊆ P ⊆ allowed``."""
    n = forced.n
    base = transitive_closure(Relation(n, tuple(row | 1 << a for a, row in enumerate(forced.rows))))
    if not extends(base, allowed) or not is_partial_order(base):
        return
    choices: list[list[tuple[int, int] | None]] = []
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in base or (b, a) in base:
                continue
            opts: list[tuple[int, int] | None] = [None]
            if (a, b) in allowed:
                opts.append((a, b))
            if (b, a) in allowed:
                opts.append((b, a))
            choices.append(opts)
    for combo in itertools.product(*choices):
        rows = list(base.rows)
        for pair in combo:
            if pair is not None:
                rows[pair[0]] |= 1 << pair[1]
        rel = Relation(n, tuple(rows))
        if is_partial_order(rel):
            yield rel


def _slot_order(kinds: Sequence[str], incl: Sequence[tuple[int, int]]) -> list[int]:
    """Linear slots first, then partial slots so that supersets come before subsets."""
    linear = [i for i, k in enumerate(kinds) if k == LINEAR]
    partial = [i for i, k in enumerate(kinds) if k != LINEAR]
    done = set(linear)
    ordered = list(linear)
    while partial:
        for i in partial:
            uppers = {q for p, q in incl if p == i and q != i and q not in done and (q, i) not in incl}
            if not uppers:
                ordered.append(i)
                done.add(i)
                partial.remove(i)
                break
        else:
            ordered.append(partial.pop(0))
            done.add(ordered[-1])
    return ordered


def generate_structures(
    spec: ClassSpec,
    n: int,
    forced: Sequence[Relation] | None = None,
    allowed: Sequence[Relation] | None = None,
    fix_first_linear: bool = False,
) -> Iterator[Multiposet]:
    """Labelled members of ``spec`` on ``{0..n-1}`` with per-slot bounds.

    Slots are filled one at a time; each candidate is cut down by the
    inclusion constraints against slots already filled.  Every yielded
    structure passes the full membership test.
    """
    r = slot_count(spec)
    kinds = slot_kinds(spec)
    incl = inclusions(spec)
    diag = Relation.diagonal(n)
    full = Relation(n, ((1 << n) - 1,) * n)
    forced = list(forced) if forced is not None else [diag] * r
    allowed = list(allowed) if allowed is not None else [full] * r
    order = _slot_order(kinds, incl)
    first_linear = next((i for i in order if kinds[i] == LINEAR), None)
    assigned: list[Relation | None] = [None] * r

    def bounds(slot: int) -> tuple[Relation, Relation]:
        lo, hi = forced[slot], allowed[slot]
        for p, q in incl:
            if p == slot and assigned[q] is not None:
                hi = hi.intersection(assigned[q])
            if q == slot and assigned[p] is not None:
                lo = lo.union(assigned[p])
        return lo, hi

    def rec(idx: int) -> Iterator[Multiposet]:
        if idx == r:
            x = Multiposet(n, tuple(assigned))
            if is_member(spec, x):
                yield x
            return
        slot = order[idx]
        lo, hi = bounds(slot)
        if kinds[slot] == LINEAR:
            if fix_first_linear and slot == first_linear:
                candidates: Iterator[Relation] = iter([Relation.chain(range(n))])
            else:
                candidates = linear_orders_between(lo, hi)
        else:
            candidates = partial_orders_between(lo, hi)
        for rel in candidates:
            assigned[slot] = rel
            yield from rec(idx + 1)
        assigned[slot] = None

    yield from rec(0)


@lru_cache(maxsize=256)
def _enumerate_cached(spec: ClassSpec, n: int) -> tuple[Multiposet, ...]:
    kinds = slot_kinds(spec)
    reps: dict[bytes, Multiposet] = {}
    # any member is isomorphic to one whose first linear slot is 0 < 1 < ... < n-1
    fix = LINEAR in kinds
    for x in generate_structures(spec, n, fix_first_linear=fix):
        key, perm = canonical_form(x)
        if key not in reps:
            reps[key] = x.permute(perm)
    return tuple(reps[key] for key in sorted(reps))


def enumerate_class(spec: ClassSpec, n: int, bound: int = ENUMERATION_BOUND) -> list[Multiposet]:
    """One canonical representative per isomorphism class of size-``n`` members, sorted by key."""
    if n < 1:
        raise MultiposetError("structures have at least one element")
    if n > bound:
        raise BoundExceeded(f"enumeration of size {n} exceeds bound {bound}")
    return list(_enumerate_cached(spec, n))
