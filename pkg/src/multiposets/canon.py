"""Exact canonical forms of multiposets.

The canonical string is the lexicographically smallest encoding of the
relation matrices over all relabellings.  Relabellings are first restricted
to those sorting elements by an isomorphism-invariant degree signature, which
keeps the search tiny whenever some slot is a linear order, and the remaining
choices are explored by branch and bound on the encoding prefix.
"""
from __future__ import annotations

from functools import lru_cache

from .structure import Multiposet


def _signature(x: Multiposet, v: int) -> tuple[int, ...]:
    sig = []
    for rel in x.relations:
        sig.append(bin(rel.rows[v]).count("1"))
        sig.append(sum(row >> v & 1 for row in rel.rows))
    return tuple(sig)


def _block(x: Multiposet, placed: list[int], v: int) -> tuple[int, ...]:
    # bits contributed when v takes the next position, given earlier positions
    out = []
    for rel in x.relations:
        rows = rel.rows
        row_v = rows[v]
        bits = 0
        for u in placed:
            bits = bits << 2 | (row_v >> u & 1) << 1 | (rows[u] >> v & 1)
        bits = bits << 1 | (row_v >> v & 1)
        out.append(bits)
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def canonical_form(x: Multiposet) -> tuple[bytes, tuple[int, ...]]:
    """Return ``(key, perm)`` with ``x.permute(perm)`` the canonical representative.

    Two multiposets get equal keys iff they are isomorphic.
    """
    n = x.size
    sigs = [_signature(x, v) for v in range(n)]
    order = sorted(range(n), key=lambda v: sigs[v])
    cell_of_position = [sigs[v] for v in order]

    best: list[tuple[int, ...]] | None = None
    best_perm: list[int] | None = None
    placed: list[int] = []
    blocks: list[tuple[int, ...]] = []
    used = [False] * n

    def search(pos: int, tight: bool) -> bool:
        # tight: the current prefix equals the prefix of ``best``
        nonlocal best, best_perm
        if pos == n:
            if best is None or not tight:
                best = list(blocks)
                best_perm = list(placed)
                return True
            return False
        replaced = False
        target = cell_of_position[pos]
        for v in order:
            if used[v] or sigs[v] != target:
                continue
            blk = _block(x, placed, v)
            still_tight = tight
            if best is not None and tight:
                if blk > best[pos]:
                    continue
                if blk < best[pos]:
                    still_tight = False
            used[v] = True
            placed.append(v)
            blocks.append(blk)
            if search(pos + 1, still_tight):
                replaced = True
                tight = True
            blocks.pop()
            placed.pop()
            used[v] = False
        return replaced

    search(0, True)
    assert best is not None and best_perm is not None
    perm = [0] * n
    for position, v in enumerate(best_perm):
        perm[v] = position
    return _encode(n, x.slots, best), tuple(perm)


def _encode(n: int, slots: int, blocks: list[tuple[int, ...]]) -> bytes:
    value = 1
    for pos, blk in enumerate(blocks):
        width = 2 * pos + 1
        for bits in blk:
            value = value << width | bits
    body = value.to_bytes((value.bit_length() + 7) // 8, "big")
    return bytes([n, slots]) + body


def canonical_key(x: Multiposet) -> bytes:
    return canonical_form(x)[0]


def canonical_representative(x: Multiposet) -> Multiposet:
    return x.permute(canonical_form(x)[1])


def is_isomorphic(x: Multiposet, y: Multiposet) -> bool:
    return x.size == y.size and x.slots == y.slots and canonical_key(x) == canonical_key(y)
