"""Seeded random members of K(T) and C(s,m), and cone-first diagram instances."""
from __future__ import annotations

import random

from .amalgam import BinaryDiagram, Cone, generate_diagram_from_cone
from .classes import bar_translate, is_member_csm, is_member_k, is_member_kbar
from .errors import MultiposetError
from .hom import enumerate_embeddings
from .order import Relation, Template, TemplateInfo, chain_sequence, transitive_closure
from .structure import Multiposet, induced_substructure


def random_linear(n: int, rng: random.Random) -> Relation:
    seq = list(range(n))
    rng.shuffle(seq)
    return Relation.chain(seq)


def random_partial_within(bound: Relation, rng: random.Random, density: float = 0.5) -> Relation:
    """Closure of a random subset of a transitive ``bound``; stays inside ``bound``."""
    pairs = [(a, b) for a, b in bound.pairs() if a != b and rng.random() < density]
    pairs += [(a, a) for a in range(bound.n)]
    return transitive_closure(Relation.from_pairs(bound.n, pairs))


def random_linear_extension(p: Relation, rng: random.Random) -> Relation:
    n = p.n
    remaining = set(range(n))
    seq = []
    while remaining:
        minimal = sorted(x for x in remaining if not any(y != x and (y, x) in p for y in remaining))
        pick = rng.choice(minimal)
        seq.append(pick)
        remaining.remove(pick)
    return Relation.chain(seq)


def random_member_k(template: Template, n: int, rng: random.Random, density: float = 0.5) -> Multiposet:
    """Random T-multiposet: maximal slots linear, every other slot inside all of its upper slots."""
    t = template.t
    full = Relation(n, ((1 << n) - 1,) * n)
    # process elements with more elements above them later
    order = sorted(range(1, t + 1), key=lambda i: sum(template.leq(i, j) for j in range(1, t + 1)))
    rels: dict[int, Relation] = {}
    for i in order:
        uppers = [j for j in range(1, t + 1) if j != i and template.leq(i, j)]
        if not uppers:
            rels[i] = random_linear(n, rng)
            continue
        bound = full
        for j in uppers:
            bound = bound.intersection(rels[j])
        rels[i] = random_partial_within(bound, rng, density)
    x = Multiposet(n, tuple(rels[i] for i in range(1, t + 1)))
    assert is_member_k(template, x)
    return x


def random_member_csm(s: int, m: int, n: int, rng: random.Random, density: float = 0.5) -> Multiposet:
    partial = [random_partial_within(random_linear(n, rng), rng, density) for _ in range(s)]
    linear = [random_linear_extension(p, rng) for p in partial]
    linear += [random_linear(n, rng) for _ in range(m)]
    return Multiposet(n, tuple(partial + linear))


def perturb_into_csm(y: Multiposet, s: int, rng: random.Random, density: float = 0.3) -> Multiposet:
    """Grow each partial slot inside its own linear extension; the result stays in C(s,m)."""
    rels = list(y.relations)
    for a in range(s):
        lin = rels[s + a]
        seq = chain_sequence(lin)
        extra = [(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 1, len(seq)) if rng.random() < density]
        rels[a] = transitive_closure(rels[a].union(Relation.from_pairs(y.size, extra)))
    return Multiposet(y.size, tuple(rels))


def cone_first_instance(
    info: TemplateInfo,
    seed: int,
    apex_size: int = 6,
    max_top: int = 4,
    max_tops: int = 4,
    max_bottoms: int = 4,
    attempts: int = 200,
) -> tuple[BinaryDiagram, Cone]:
    """A diagram over objects of K̄(T) with a compatible cone whose apex lies in C(s,m).

    The apex is a translated T-multiposet whose partial slots were then grown,
    so it usually falls outside K̄(T) while still containing many copies of
    small members.
    """
    rng = random.Random(seed)
    s, m = info.s, info.m
    for _ in range(attempts):
        x = random_member_k(info.template, apex_size, rng)
        apex = perturb_into_csm(bar_translate(info.template, x), s, rng)
        assert is_member_csm(s, m, apex)
        size_b = rng.randint(2, max_top)
        subset = rng.sample(range(apex_size), size_b)
        b, _ = induced_substructure(apex, subset)
        if not is_member_kbar(info, b):
            continue
        size_a = rng.randint(1, size_b)
        a, _ = induced_substructure(b, rng.sample(range(size_b), size_a))
        if len(enumerate_embeddings(b, apex)) < 1:
            continue
        try:
            return generate_diagram_from_cone(
                apex, b, a, rng.randrange(1 << 30),
                tops=rng.randint(1, max_tops), bottoms=rng.randint(1, max_bottoms),
            )
        except MultiposetError:
            continue
    raise MultiposetError("could not generate a cone-first instance")
