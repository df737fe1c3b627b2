"""The arrow relation ``C -> (B)^A_k``, witness search, and HP/JEP/SAP checkers.

``arrow_check`` reduces the arrow to hypergraph colouring: vertices are the
embeddings ``A -> C``, and every ``w: B -> C`` contributes the hyperedge
``{w ∘ h : h in hom(A, B)}``.  The arrow holds iff no ``k``-colouring leaves
every hyperedge non-monochromatic.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .classes import ClassSpec, enumerate_class, generate_structures, is_member
from .errors import MultiposetError
from .hom import Embedding, compose, enumerate_embeddings, first_embedding, image_mask
from .order import Relation
from .structure import Multiposet, induced_substructure

MAX_COLORS = 4


@dataclass(frozen=True)
class Coloring:
    """Colours ``1..k`` assigned to ``hom(A, C)`` in its enumeration order."""

    k: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise MultiposetError("a colouring needs k >= 2")
        if any(not 1 <= c <= self.k for c in self.assignment):
            raise MultiposetError("colour outside 1..k")


@dataclass(frozen=True)
class ArrowResult:
    holds: bool
    counterexample: Coloring | None = None
    hom_ac: tuple[Embedding, ...] = ()
    nodes: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.holds == (self.counterexample is not None):
            raise MultiposetError("a positive verdict carries no colouring; a negative one must")


# -- hypergraph colouring -----------------------------------------------------


class _Hypergraph:
    def __init__(self, nv: int, edges: Sequence[tuple[int, ...]], k: int) -> None:
        self.nv = nv
        self.k = k
        self.edges = list(edges)
        self.incident: list[list[int]] = [[] for _ in range(nv)]
        for e, edge in enumerate(self.edges):
            for v in edge:
                self.incident[v].append(e)
        self.degree = [len(inc) for inc in self.incident]

    def root(self) -> tuple[list[int], list[int], int] | None:
        colors = [-1] * self.nv
        domains = [(1 << self.k) - 1] * self.nv
        for edge in self.edges:
            if len(edge) == 1:
                return None
        return colors, domains, -1

    def _propagate(self, colors: list[int], domains: list[int], queue: list[tuple[int, int]]) -> bool:
        while queue:
            v, c = queue.pop()
            if colors[v] != -1:
                if colors[v] != c:
                    return False
                continue
            if not domains[v] >> c & 1:
                return False
            colors[v] = c
            domains[v] = 1 << c
            for e in self.incident[v]:
                edge = self.edges[e]
                free = -1
                nfree = 0
                mono = True
                for u in edge:
                    cu = colors[u]
                    if cu == -1:
                        nfree += 1
                        free = u
                    elif cu != c:
                        mono = False
                        break
                if not mono:
                    continue
                if nfree == 0:
                    return False
                if nfree == 1:
                    dom = domains[free] & ~(1 << c)
                    if not dom:
                        return False
                    domains[free] = dom
                    if dom & (dom - 1) == 0:
                        queue.append((free, dom.bit_length() - 1))
        return True

    def children(self, state: tuple[list[int], list[int], int]) -> Iterator[tuple[list[int], list[int], int]]:
        colors, domains, max_used = state
        best = -1
        best_key: tuple[int, int] | None = None
        for v in range(self.nv):
            if colors[v] != -1:
                continue
            key = (bin(domains[v]).count("1"), -self.degree[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        # colours above max_used + 1 are interchangeable with max_used + 1
        for c in range(min(self.k, max_used + 2)):
            if not domains[best] >> c & 1:
                continue
            new_colors = list(colors)
            new_domains = list(domains)
            if self._propagate(new_colors, new_domains, [(best, c)]):
                yield new_colors, new_domains, max(max_used, max(new_colors))

    def complete(self, state: tuple[list[int], list[int], int]) -> bool:
        return -1 not in state[0]

    def solve_from(self, state: tuple[list[int], list[int], int]) -> tuple[list[int] | None, int]:
        """Depth-first search below ``state``; returns (first full colouring, nodes visited)."""
        nodes = 1
        if self.complete(state):
            return state[0], nodes
        stack = [self.children(state)]
        while stack:
            child = next(stack[-1], None)
            if child is None:
                stack.pop()
                continue
            nodes += 1
            if self.complete(child):
                return child[0], nodes
            stack.append(self.children(child))
        return None, nodes

    def frontier(self, width: int) -> list[tuple[list[int], list[int], int]]:
        """Expand the search tree level by level, keeping depth-first order."""
        start = self.root()
        if start is None:
            return []
        front = [start]
        while len(front) < width:
            expanded = []
            grew = False
            for state in front:
                if self.complete(state):
                    expanded.append(state)
                else:
                    expanded.extend(self.children(state))
                    grew = True
            front = expanded
            if not grew or not front:
                break
        return front


def _solve_task(args: tuple[_Hypergraph, tuple[list[int], list[int], int]]) -> tuple[list[int] | None, int]:
    graph, state = args
    return graph.solve_from(state)


def _find_avoiding_coloring(graph: _Hypergraph, workers: int) -> tuple[list[int] | None, int]:
    if workers <= 1:
        start = graph.root()
        if start is None:
            return None, 1
        return graph.solve_from(start)
    front = graph.frontier(4 * workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_solve_task, [(graph, state) for state in front]))
    nodes = sum(r[1] for r in results)
    for coloring, _ in results:
        if coloring is not None:
            return coloring, nodes
    return None, nodes


def _minimal_edges(edges: set[tuple[int, ...]]) -> list[tuple[int, ...]]:
    # an edge containing another edge can never be the only monochromatic one
    masks = sorted(((sum(1 << v for v in e), e) for e in edges), key=lambda item: (len(item[1]), item[0]))
    kept: list[tuple[int, tuple[int, ...]]] = []
    for mask, edge in masks:
        if not any(km & mask == km for km, _ in kept):
            kept.append((mask, edge))
    return sorted(edge for _, edge in kept)


def arrow_hypergraph(
    c: Multiposet, b: Multiposet, a: Multiposet
) -> tuple[list[Embedding], list[tuple[int, ...]]]:
    """``hom(A, C)`` and the hyperedges contributed by ``hom(B, C)``."""
    hom_ac = enumerate_embeddings(a, c)
    index = {f: i for i, f in enumerate(hom_ac)}
    hom_ab = enumerate_embeddings(a, b)
    edges = set()
    for w in enumerate_embeddings(b, c):
        edges.add(tuple(sorted(index[compose(w, h)] for h in hom_ab)))
    return hom_ac, sorted(edges)


def _check_arrow_args(c: Multiposet, b: Multiposet, a: Multiposet, k: int) -> None:
    if k < 2:
        raise MultiposetError("k must be at least 2")
    if k > MAX_COLORS:
        raise MultiposetError(f"k above {MAX_COLORS} is not supported")
    if not (a.slots == b.slots == c.slots):
        raise MultiposetError("A, B and C must share a signature")
    if first_embedding(a, b) is None:
        raise MultiposetError("hom(A, B) is empty")


def arrow_check(c: Multiposet, b: Multiposet, a: Multiposet, k: int = 2, workers: int = 1) -> ArrowResult:
    """Decide ``C -> (B)^A_k`` exactly; negative verdicts carry a colouring of ``hom(A, C)``."""
    _check_arrow_args(c, b, a, k)
    hom_ac, edges = arrow_hypergraph(c, b, a)
    graph = _Hypergraph(len(hom_ac), _minimal_edges(set(edges)), k)
    coloring, nodes = _find_avoiding_coloring(graph, workers)
    if coloring is None:
        return ArrowResult(True, None, tuple(hom_ac), nodes)
    return ArrowResult(False, Coloring(k, tuple(col + 1 for col in coloring)), tuple(hom_ac), nodes)


def verify_arrow_counterexample(c: Multiposet, b: Multiposet, a: Multiposet, k: int, col: Coloring) -> bool:
    """True iff no ``w: B -> C`` makes every ``w ∘ h`` the same colour."""
    hom_ac = enumerate_embeddings(a, c)
    if len(col.assignment) != len(hom_ac):
        raise MultiposetError("colouring does not cover hom(A, C)")
    if col.k != k:
        raise MultiposetError("colouring uses a different number of colours")
    color_of = dict(zip(hom_ac, col.assignment))
    hom_ab = enumerate_embeddings(a, b)
    for w in enumerate_embeddings(b, c):
        if len({color_of[compose(w, h)] for h in hom_ab}) == 1:
            return False
    return True


# -- searches over a class ----------------------------------------------------


def ramsey_witness_search(
    spec: ClassSpec,
    a: Multiposet,
    b: Multiposet,
    k: int = 2,
    max_n: int = 6,
    bound: int | None = None,
    workers: int = 1,
) -> tuple[Multiposet, ArrowResult] | None:
    """Smallest class member ``C`` (by size, then enumeration order) with ``C -> (B)^A_k``.

    Returns ``None`` once every size up to ``max_n`` is exhausted; raises
    :class:`BoundExceeded` if a size level cannot be enumerated.
    """
    if not is_member(spec, a) or not is_member(spec, b):
        raise MultiposetError("A and B must belong to the class")
    _check_arrow_args(b, b, a, k)
    for n in range(b.size, max_n + 1):
        members = enumerate_class(spec, n) if bound is None else enumerate_class(spec, n, bound)
        for c in members:
            if first_embedding(b, c) is None:
                continue
            result = arrow_check(c, b, a, k, workers)
            if result.holds:
                return c, result
    return None


def _members_upto(spec: ClassSpec, n: int) -> list[Multiposet]:
    return [x for size in range(1, n + 1) for x in enumerate_class(spec, size)]


def has_hp_upto(spec: ClassSpec, n: int) -> bool:
    """Every induced substructure of a member of size <= n is a member."""
    for x in _members_upto(spec, n):
        for size in range(1, x.size):
            for subset in itertools.combinations(range(x.size), size):
                if not is_member(spec, induced_substructure(x, subset)[0]):
                    return False
    return True


def joint_embedding(spec: ClassSpec, a: Multiposet, b: Multiposet, bound: int | None = None) -> Multiposet | None:
    """Smallest member of size at most ``|a| + |b|`` into which both embed."""
    for size in range(max(a.size, b.size), a.size + b.size + 1):
        members = enumerate_class(spec, size) if bound is None else enumerate_class(spec, size, bound)
        for c in members:
            if first_embedding(a, c) is not None and first_embedding(b, c) is not None:
                return c
    return None


def has_jep_upto(spec: ClassSpec, n: int, bound: int | None = None) -> bool:
    members = _members_upto(spec, n)
    for i, a in enumerate(members):
        for b in members[i:]:
            if joint_embedding(spec, a, b, bound) is None:
                return False
    return True


@dataclass(frozen=True)
class Amalgam:
    d: Multiposet
    g1: Embedding
    g2: Embedding


def strong_amalgam(
    spec: ClassSpec, a: Multiposet, b: Multiposet, c: Multiposet, f1: Embedding, f2: Embedding
) -> Amalgam | None:
    """A strong amalgam of ``f1: A -> B`` and ``f2: A -> C`` inside the class, if one exists.

    A strong amalgam of size at most ``|B| + |C| - |A|`` is exactly the union of
    the two images, so ``D`` is built on ``B`` followed by ``C \\ f2(A)`` and only
    the pairs between ``B \\ f1(A)`` and ``C \\ f2(A)`` are searched.
    """
    nb = b.size
    from_a = {f2[x]: f1[x] for x in range(a.size)}
    g2 = []
    fresh = nb
    for y in range(c.size):
        if y in from_a:
            g2.append(from_a[y])
        else:
            g2.append(fresh)
            fresh += 1
    n = fresh
    b_mask = (1 << nb) - 1
    c_mask = image_mask(g2)
    forced, allowed = [], []
    for rb, rc in zip(b.relations, c.relations):
        lifted_b = Relation(n, rb.rows + (0,) * (n - nb))
        lifted_c = Relation.from_pairs(n, ((g2[x], g2[y]) for x, y in rc.pairs()))
        f = lifted_b.union(lifted_c)
        rows = []
        for v in range(n):
            row = (1 << n) - 1
            if v < nb:
                row &= ~b_mask | lifted_b.rows[v]
            if c_mask >> v & 1:
                row &= ~c_mask | lifted_c.rows[v]
            rows.append(row)
        forced.append(f)
        allowed.append(Relation(n, tuple(rows)))
    for d in generate_structures(spec, n, forced, allowed):
        return Amalgam(d, tuple(range(nb)), tuple(g2))
    return None


def has_sap_upto(spec: ClassSpec, n: int) -> bool:
    members = _members_upto(spec, n)
    for a in members:
        for b in members:
            if b.size < a.size:
                continue
            homs_ab = enumerate_embeddings(a, b)
            if not homs_ab:
                continue
            for c in members:
                if c.size < a.size:
                    continue
                homs_ac = enumerate_embeddings(a, c)
                for f1 in homs_ab:
                    for f2 in homs_ac:
                        if strong_amalgam(spec, a, b, c, f1, f2) is None:
                            return False
    return True

