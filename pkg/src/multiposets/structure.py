"""Multiposets: a finite ground set with an ordered list of binary relations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MultiposetError
from .order import Relation


@dataclass(frozen=True)
class Multiposet:
    size: int
    relations: tuple[Relation, ...]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise MultiposetError("a multiposet needs a nonempty ground set")
        for rel in self.relations:
            if rel.n != self.size:
                raise MultiposetError(f"relation of size {rel.n} on a ground set of size {self.size}")

    @classmethod
    def from_pairs(cls, size: int, relations: Iterable[Iterable[Sequence[int]]]) -> Multiposet:
        return cls(size, tuple(Relation.from_pairs(size, rel) for rel in relations))

    @property
    def slots(self) -> int:
        return len(self.relations)

    def __getitem__(self, slot: int) -> Relation:
        return self.relations[slot]

    def permute(self, perm: Sequence[int]) -> Multiposet:
        """Isomorphic copy where element ``a`` is renamed ``perm[a]``."""
        if sorted(perm) != list(range(self.size)):
            raise MultiposetError("not a permutation of the ground set")
        return Multiposet(self.size, tuple(rel.permute(perm) for rel in self.relations))


def chain(n: int, slots: int = 1) -> Multiposet:
    """``0 < 1 < ... < n-1`` repeated in every slot."""
    rel = Relation.chain(range(n))
    return Multiposet(n, (rel,) * slots)


def point(slots: int = 1) -> Multiposet:
    return chain(1, slots)


def reduct(x: Multiposet, slots: Sequence[int]) -> Multiposet:
    """Same ground set, only the listed relations, in the listed order."""
    for i in slots:
        if not 0 <= i < x.slots:
            raise MultiposetError(f"slot {i} out of range for {x.slots} relations")
    return Multiposet(x.size, tuple(x.relations[i] for i in slots))


def induced_substructure(x: Multiposet, subset: Iterable[int]) -> tuple[Multiposet, tuple[int, ...]]:
    """Substructure on ``subset`` plus the inclusion map back into ``x``.

    Surviving elements keep their relative numeric order; the returned map
    sends new id ``i`` to the ``i``-th smallest element of ``subset``.
    """
    elems = sorted(set(subset))
    if not elems:
        raise MultiposetError("induced substructure of an empty subset")
    if elems[0] < 0 or elems[-1] >= x.size:
        raise MultiposetError("subset element outside the ground set")
    sub = Multiposet(len(elems), tuple(rel.restrict(elems) for rel in x.relations))
    return sub, tuple(elems)
