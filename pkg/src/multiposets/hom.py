"""Embeddings between multiposets.

An embedding is stored as a tuple ``f`` with ``f[a]`` the image of source
element ``a``.  It must be injective and preserve and reflect every slot.
"""
from __future__ import annotations

import threading
from typing import Iterator, Sequence

from .canon import canonical_form
from .errors import MultiposetError
from .structure import Multiposet

Embedding = tuple[int, ...]


def _check_signature(a: Multiposet, b: Multiposet) -> None:
    if a.slots != b.slots:
        raise MultiposetError(f"slot counts differ: {a.slots} vs {b.slots}")


def is_embedding(f: Sequence[int], a: Multiposet, b: Multiposet) -> bool:
    _check_signature(a, b)
    if len(f) != a.size:
        raise MultiposetError("map length does not match the source size")
    if any(not 0 <= v < b.size for v in f) or len(set(f)) != len(f):
        return False
    for ra, rb in zip(a.relations, b.relations):
        for x in range(a.size):
            row_a = ra.rows[x]
            row_b = rb.rows[f[x]]
            for y in range(a.size):
                if (row_a >> y & 1) != (row_b >> f[y] & 1):
                    return False
    return True


def enumerate_embeddings(a: Multiposet, b: Multiposet) -> list[Embedding]:
    """Every embedding ``a -> b`` in lexicographic order of the map arrays."""
    return list(iter_embeddings(a, b))


def first_embedding(a: Multiposet, b: Multiposet) -> Embedding | None:
    return next(iter_embeddings(a, b), None)


def iter_embeddings(a: Multiposet, b: Multiposet) -> Iterator[Embedding]:
    """Backtracking over partial injections, smallest unmapped source element first."""
    _check_signature(a, b)
    if a.size > b.size:
        return
    pairs = list(zip((r.rows for r in a.relations), (r.rows for r in b.relations)))
    n = a.size
    image = [0] * n
    used = [False] * b.size

    def fits(x: int, u: int) -> bool:
        for rows_a, rows_b in pairs:
            ra_x, rb_u = rows_a[x], rows_b[u]
            if (ra_x >> x & 1) != (rb_u >> u & 1):
                return False
            for y in range(x):
                v = image[y]
                if (ra_x >> y & 1) != (rb_u >> v & 1) or (rows_a[y] >> x & 1) != (rows_b[v] >> u & 1):
                    return False
        return True

    def rec(x: int) -> Iterator[Embedding]:
        if x == n:
            yield tuple(image)
            return
        for u in range(b.size):
            if used[u] or not fits(x, u):
                continue
            used[u] = True
            image[x] = u
            yield from rec(x + 1)
            used[u] = False

    yield from rec(0)


def compose(g: Sequence[int], f: Sequence[int]) -> Embedding:
    """``g ∘ f``: apply ``f`` first."""
    if f and max(f) >= len(g):
        raise MultiposetError("composition size mismatch")
    return tuple(g[v] for v in f)


def identity(n: int) -> Embedding:
    return tuple(range(n))


def image_mask(f: Sequence[int]) -> int:
    mask = 0
    for v in f:
        mask |= 1 << v
    return mask


class HomStore:
    """Memoised hom-sets keyed by the canonical forms of source and target.

    Answers are computed once between canonical representatives and conjugated
    back to the caller's labelling on every hit.
    """

    def __init__(self) -> None:
        self._cache: dict[tuple[bytes, bytes], tuple[Embedding, ...]] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._cache)

    def get(self, a: Multiposet, b: Multiposet) -> list[Embedding]:
        _check_signature(a, b)
        key_a, perm_a = canonical_form(a)
        key_b, perm_b = canonical_form(b)
        key = (key_a, key_b)
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            self.misses += 1
            cached = tuple(enumerate_embeddings(a.permute(perm_a), b.permute(perm_b)))
            with self._lock:
                self._cache[key] = cached
        else:
            self.hits += 1
        inv_b = [0] * b.size
        for v, pos in enumerate(perm_b):
            inv_b[pos] = v
        return sorted(tuple(inv_b[g[perm_a[x]]] for x in range(a.size)) for g in cached)


_default_store = HomStore()


def hom_store_get(a: Multiposet, b: Multiposet, store: HomStore | None = None) -> list[Embedding]:
    return (store if store is not None else _default_store).get(a, b)
