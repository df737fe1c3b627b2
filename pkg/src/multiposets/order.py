"""Binary relations as bitset rows, order predicates, and template analysis.

A :class:`Relation` on ``{0..n-1}`` stores row ``a`` as an integer whose bit
``b`` is set iff ``(a, b)`` is in the relation.  Orders are kept non-strict
(reflexive) throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import MultiposetError

MAX_SIZE = 64


@dataclass(frozen=True)
class Relation:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_SIZE:
            raise MultiposetError(f"relation size {self.n} outside 0..{MAX_SIZE}")
        if len(self.rows) != self.n:
            raise MultiposetError("row count does not match relation size")
        full = (1 << self.n) - 1
        for row in self.rows:
            if row & ~full:
                raise MultiposetError("pair coordinate out of range")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> Relation:
        rows = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise MultiposetError(f"pair ({a}, {b}) outside 0..{n - 1}")
            rows[a] |= 1 << b
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Relation:
        return cls(n, (0,) * n)

    @classmethod
    def diagonal(cls, n: int) -> Relation:
        return cls(n, tuple(1 << a for a in range(n)))

    @classmethod
    def chain(cls, sequence: Sequence[int]) -> Relation:
        """Reflexive linear order listing ``sequence`` from bottom to top."""
        n = len(sequence)
        if sorted(sequence) != list(range(n)):
            raise MultiposetError("chain sequence must be a permutation of 0..n-1")
        rows = [0] * n
        above = 0
        for a in reversed(sequence):
            above |= 1 << a
            rows[a] = above
        return cls(n, tuple(rows))

    def __contains__(self, pair: Sequence[int]) -> bool:
        a, b = pair
        return bool(self.rows[a] >> b & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return sum(bin(row).count("1") for row in self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(self.n) if self.rows[a] >> b & 1]

    def union(self, other: Relation) -> Relation:
        _same_size(self, other)
        return Relation(self.n, tuple(x | y for x, y in zip(self.rows, other.rows)))

    def intersection(self, other: Relation) -> Relation:
        _same_size(self, other)
        return Relation(self.n, tuple(x & y for x, y in zip(self.rows, other.rows)))

    def restrict(self, subset: Sequence[int]) -> Relation:
        """Restriction to ``subset``, relabelled so ``subset[i]`` becomes ``i``."""
        rows = []
        for a in subset:
            row = 0
            for i, b in enumerate(subset):
                if self.rows[a] >> b & 1:
                    row |= 1 << i
            rows.append(row)
        return Relation(len(subset), tuple(rows))

    def mask(self, subset_mask: int) -> Relation:
        """Keep only pairs with both coordinates in ``subset_mask`` (no relabelling)."""
        return Relation(
            self.n,
            tuple(row & subset_mask if subset_mask >> a & 1 else 0 for a, row in enumerate(self.rows)),
        )

    def permute(self, perm: Sequence[int]) -> Relation:
        """Image under the bijection ``a -> perm[a]``."""
        rows = [0] * self.n
        for a in range(self.n):
            row = self.rows[a]
            image = 0
            while row:
                low = row & -row
                image |= 1 << perm[low.bit_length() - 1]
                row ^= low
            rows[perm[a]] = image
        return Relation(self.n, tuple(rows))

    def converse(self) -> Relation:
        return Relation.from_pairs(self.n, ((b, a) for a, b in self.pairs()))


def _same_size(r: Relation, q: Relation) -> None:
    if r.n != q.n:
        raise MultiposetError(f"relation sizes differ: {r.n} vs {q.n}")


def transitive_closure(r: Relation) -> Relation:
    rows = list(r.rows)
    for k in range(r.n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(r.n):
            if rows[i] & bit:
                rows[i] |= row_k
    return Relation(r.n, tuple(rows))


def reflexive_closure(r: Relation) -> Relation:
    return Relation(r.n, tuple(row | 1 << a for a, row in enumerate(r.rows)))


def is_reflexive(r: Relation) -> bool:
    return all(row >> a & 1 for a, row in enumerate(r.rows))


def is_antisymmetric(r: Relation) -> bool:
    for a, row in enumerate(r.rows):
        rest = row & ~(1 << a)
        while rest:
            low = rest & -rest
            b = low.bit_length() - 1
            if r.rows[b] >> a & 1:
                return False
            rest ^= low
    return True


def is_transitive(r: Relation) -> bool:
    rows = r.rows
    for a, row in enumerate(rows):
        rest = row
        while rest:
            low = rest & -rest
            if rows[low.bit_length() - 1] & ~row:
                return False
            rest ^= low
    return True


@lru_cache(maxsize=1 << 16)
def is_partial_order(r: Relation) -> bool:
    return is_reflexive(r) and is_antisymmetric(r) and is_transitive(r)


@lru_cache(maxsize=1 << 16)
def is_linear_order(r: Relation) -> bool:
    if not is_partial_order(r):
        return False
    full = (1 << r.n) - 1
    for a, row in enumerate(r.rows):
        # a is comparable to b iff b in row_a or a in row_b
        comparable = row
        for b in range(r.n):
            if r.rows[b] >> a & 1:
                comparable |= 1 << b
        if comparable != full:
            return False
    return True


def extends(inner: Relation, outer: Relation) -> bool:
    """True iff every pair of ``inner`` is a pair of ``outer``."""
    _same_size(inner, outer)
    return all(x & ~y == 0 for x, y in zip(inner.rows, outer.rows))


@lru_cache(maxsize=1 << 14)
def linear_extension_fixed(p: Relation) -> Relation:
    """Deterministic linear extension of a partial order.

    Kahn-style: repeatedly emit the smallest-id element with no remaining
    strict predecessor.  The result depends only on the pair set of ``p``.
    """
    if not is_partial_order(p):
        raise MultiposetError("linear extension requested for a non-partial-order")
    n = p.n
    # preds[b]: strict predecessors of b
    preds = [0] * n
    for a, row in enumerate(p.rows):
        rest = row & ~(1 << a)
        while rest:
            low = rest & -rest
            preds[low.bit_length() - 1] |= 1 << a
            rest ^= low
    remaining = (1 << n) - 1
    sequence = []
    while remaining:
        for x in range(n):
            if remaining >> x & 1 and preds[x] & remaining == 0:
                sequence.append(x)
                remaining &= ~(1 << x)
                break
    return Relation.chain(sequence)


def chain_sequence(r: Relation) -> list[int]:
    """Elements of a linear order from bottom to top."""
    if not is_linear_order(r):
        raise MultiposetError("not a linear order")
    # the element with k successors (itself included) sits at position n - k
    seq = [0] * r.n
    for a, row in enumerate(r.rows):
        seq[r.n - bin(row).count("1")] = a
    return seq


@dataclass(frozen=True)
class Template:
    """A poset on ``{1..t}``; ``order`` holds it 0-shifted."""

    t: int
    order: Relation

    def __post_init__(self) -> None:
        if self.t < 1:
            raise MultiposetError("a template needs at least one element")
        if self.order.n != self.t:
            raise MultiposetError("template order size does not match t")

    @classmethod
    def from_pairs(cls, t: int, pairs: Iterable[Sequence[int]]) -> Template:
        """Build from 1-based ``(i, j)`` pairs meaning ``i ≼ j``; closes reflexively-transitively."""
        if t < 1:
            raise MultiposetError("a template needs at least one element")
        shifted = []
        for i, j in pairs:
            if not (1 <= i <= t and 1 <= j <= t):
                raise MultiposetError(f"template pair ({i}, {j}) outside 1..{t}")
            shifted.append((i - 1, j - 1))
        order = transitive_closure(reflexive_closure(Relation.from_pairs(t, shifted)))
        if not is_antisymmetric(order):
            raise MultiposetError("template order violates antisymmetry")
        return cls(t, order)

    def leq(self, i: int, j: int) -> bool:
        """``i ≼ j`` for 1-based elements."""
        return (i - 1, j - 1) in self.order

    def pairs(self) -> list[tuple[int, int]]:
        """Strict comparabilities ``i ≺ j``, 1-based."""
        return [(a + 1, b + 1) for a, b in self.order.pairs() if a != b]


@dataclass(frozen=True)
class TemplateInfo:
    template: Template
    maximal: frozenset[int]
    isolated: tuple[int, ...]
    restricted: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def s(self) -> int:
        return len(self.pairs)

    @property
    def m(self) -> int:
        return len(self.isolated)

    @property
    def slots(self) -> int:
        return 2 * self.s + self.m


def validate_template(template: Template) -> TemplateInfo:
    """Split a template into isolated points and (lower, maximal) pairs.

    ``pairs`` lists every ``(i, j)`` with ``i ≺ j`` and ``j`` maximal among
    the non-isolated elements, sorted by ``(j, i)``.
    """
    if not is_partial_order(template.order):
        raise MultiposetError("template order is not a partial order")
    t = template.t
    elements = range(1, t + 1)
    maximal = frozenset(
        i for i in elements if not any(j != i and template.leq(i, j) for j in elements)
    )
    isolated = tuple(
        i for i in elements
        if not any(j != i and (template.leq(i, j) or template.leq(j, i)) for j in elements)
    )
    restricted = tuple(i for i in elements if i not in isolated)
    pairs = sorted(
        ((i, j) for j in restricted if j in maximal for i in restricted if i != j and template.leq(i, j)),
        key=lambda p: (p[1], p[0]),
    )
    return TemplateInfo(template, maximal, isolated, restricted, tuple(pairs))
