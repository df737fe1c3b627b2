"""Brute-force reference implementations used as test oracles.

Everything here works on plain Python sets of pairs and exhaustive
enumeration, sharing no code with the bitset paths under test.
"""
from __future__ import annotations

import itertools

import numpy as np


def as_sets(x) -> list[set[tuple[int, int]]]:
    return [{(a, b) for a in range(x.size) for b in range(x.size) if x.relations[i].rows[a] >> b & 1}
            for i in range(len(x.relations))]


def closure(pairs: set, n: int) -> set:
    out = set(pairs)
    while True:
        new = {(a, d) for a, b in out for c, d in out if b == c} - out
        if not new:
            return out
        out |= new


def is_po(pairs: set, n: int) -> bool:
    refl = all((a, a) in pairs for a in range(n))
    anti = all(not ((a, b) in pairs and (b, a) in pairs) for a in range(n) for b in range(n) if a != b)
    trans = all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)
    return refl and anti and trans


def is_lo(pairs: set, n: int) -> bool:
    return is_po(pairs, n) and all((a, b) in pairs or (b, a) in pairs for a in range(n) for b in range(n))


def all_reflexive_relations(n: int) -> list[frozenset]:
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    diag = {(a, a) for a in range(n)}
    return [frozenset(diag | {p for p, bit in zip(off, bits) if bit})
            for bits in itertools.product((0, 1), repeat=len(off))]


def all_partial_orders(n: int) -> list[frozenset]:
    return [r for r in all_reflexive_relations(n) if is_po(r, n)]


def all_linear_orders(n: int) -> list[frozenset]:
    return [r for r in all_reflexive_relations(n) if is_lo(r, n)]


def member_k(template_pairs: list[tuple[int, int]], t: int, rels: list[set], n: int) -> bool:
    """Direct reading of the T-multiposet definition (1-based template pairs, given closed)."""
    leq = closure({(i, i) for i in range(1, t + 1)} | set(template_pairs), t)
    maximal = [i for i in range(1, t + 1) if not any(j != i and (i, j) in leq for j in range(1, t + 1))]
    if not all(is_po(r, n) for r in rels):
        return False
    if not all(is_lo(rels[i - 1], n) for i in maximal):
        return False
    return all(rels[i - 1] <= rels[j - 1] for i, j in leq)


def embeddings(a, b) -> list[tuple[int, ...]]:
    sa, sb = as_sets(a), as_sets(b)
    out = []
    for f in itertools.permutations(range(b.size), a.size):
        if all(((x, y) in ra) == ((f[x], f[y]) in rb)
               for ra, rb in zip(sa, sb) for x in range(a.size) for y in range(a.size)):
            out.append(f)
    return sorted(out)


def isomorphic(x, y) -> bool:
    if x.size != y.size or len(x.relations) != len(y.relations):
        return False
    sx, sy = as_sets(x), as_sets(y)
    for f in itertools.permutations(range(x.size)):
        if all({(f[a], f[b]) for a, b in rx} == ry for rx, ry in zip(sx, sy)):
            return True
    return False


def count_iso_classes(structures) -> int:
    reps = []
    for x in structures:
        if not any(isomorphic(x, r) for r in reps):
            reps.append(x)
    return len(reps)


def arrow(c, b, a, k: int) -> bool:
    """``C -> (B)^A_k`` by trying every colouring of hom(A, C) at once with numpy."""
    hom_ac = embeddings(a, c)
    index = {f: i for i, f in enumerate(hom_ac)}
    hom_ab = embeddings(a, b)
    edges = [[index[tuple(w[v] for v in h)] for h in hom_ab] for w in embeddings(b, c)]
    nv = len(hom_ac)
    codes = np.arange(k ** nv, dtype=np.int64)
    digits = np.stack([(codes // k ** i) % k for i in range(nv)], axis=1) if nv else np.zeros((1, 0), np.int64)
    some_mono = np.zeros(len(digits), dtype=bool)
    for edge in edges:
        cols = digits[:, edge]
        some_mono |= np.all(cols == cols[:, :1], axis=1)
    return bool(np.all(some_mono))
