import random

import pytest

from multiposets.classes import ClassSpec, enumerate_class, is_member
from multiposets.errors import MultiposetError
from multiposets.generate import random_member_csm
from multiposets.hom import enumerate_embeddings, first_embedding, is_embedding
from multiposets.order import Relation
from multiposets.presets import preset_template
from multiposets.ramsey import (
    ArrowResult,
    Coloring,
    arrow_check,
    arrow_hypergraph,
    has_hp_upto,
    has_jep_upto,
    has_sap_upto,
    joint_embedding,
    ramsey_witness_search,
    strong_amalgam,
    verify_arrow_counterexample,
)
from multiposets.structure import Multiposet, chain, point

import oracles


def antichain(n, slots=1):
    return Multiposet(n, (Relation.diagonal(n),) * slots)


def test_chain_arrow_holds_at_six_and_fails_at_five():
    assert arrow_check(chain(6), chain(3), chain(2)).holds
    res = arrow_check(chain(5), chain(3), chain(2))
    assert not res.holds
    assert verify_arrow_counterexample(chain(5), chain(3), chain(2), 2, res.counterexample)


@pytest.mark.parametrize("b, k, size", [(2, 2, 3), (2, 3, 4), (3, 2, 5), (3, 3, 7)])
def test_pigeonhole_sizes(b, k, size):
    # a point colouring of a chain: (b-1)k + 1 points force b of one colour
    assert arrow_check(chain(size), chain(b), point(), k).holds
    assert not arrow_check(chain(size - 1), chain(b), point(), k).holds


def test_trivial_arrow_when_b_equals_a():
    res = arrow_check(chain(3), chain(2), chain(2))
    assert res.holds and res.counterexample is None


def test_arrow_result_invariant():
    with pytest.raises(MultiposetError):
        ArrowResult(True, Coloring(2, (1,)))
    with pytest.raises(MultiposetError):
        ArrowResult(False)
    with pytest.raises(MultiposetError):
        Coloring(2, (3,))


def test_arrow_argument_checks():
    with pytest.raises(MultiposetError):
        arrow_check(chain(4), antichain(2), chain(2))
    with pytest.raises(MultiposetError):
        arrow_check(chain(4), chain(2), point(), k=1)
    with pytest.raises(MultiposetError):
        arrow_check(chain(4), chain(2), point(), k=5)
    with pytest.raises(MultiposetError):
        arrow_check(chain(4, 2), chain(2), point())


def test_hypergraph_edges():
    hom_ac, edges = arrow_hypergraph(chain(3), chain(2), point())
    assert hom_ac == [(0,), (1,), (2,)]
    assert edges == [(0, 1), (0, 2), (1, 2)]


def test_counterexample_verifier_rejects_bad_colourings():
    bad = Coloring(2, (1, 1, 1, 1, 1))
    assert not verify_arrow_counterexample(chain(5), chain(2), point(), 2, bad)
    with pytest.raises(MultiposetError):
        verify_arrow_counterexample(chain(5), chain(2), point(), 2, Coloring(2, (1, 2)))


def small_instance(rng):
    s, m = rng.choice([(0, 1), (1, 0), (0, 2), (1, 1)])
    for _ in range(100):
        a = random_member_csm(s, m, rng.randint(1, 2), rng)
        b = random_member_csm(s, m, rng.randint(a.size, 3), rng)
        c = random_member_csm(s, m, rng.randint(b.size, 5), rng)
        if first_embedding(a, b) is not None and len(enumerate_embeddings(a, c)) <= 14:
            return a, b, c
    raise AssertionError("no instance drawn")


def test_agrees_with_exhaustive_colouring_oracle():
    rng = random.Random(2024)
    seen = {True: 0, False: 0}
    for _ in range(60):
        a, b, c = small_instance(rng)
        k = rng.choice([2, 3]) if len(enumerate_embeddings(a, c)) <= 9 else 2
        res = arrow_check(c, b, a, k)
        assert res.holds == oracles.arrow(c, b, a, k)
        seen[res.holds] += 1
        if not res.holds:
            assert verify_arrow_counterexample(c, b, a, k, res.counterexample)
    assert seen[True] and seen[False]


def test_monotone_in_c_and_k():
    assert not arrow_check(chain(3), chain(2), point(), 3).holds
    for n in range(4, 8):
        assert arrow_check(chain(n), chain(2), point(), 3).holds
    # more colours can only break an arrow
    assert arrow_check(chain(4), chain(2), point(), 3).holds
    assert not arrow_check(chain(4), chain(2), point(), 4).holds
    # a superstructure of a witness is a witness
    rng = random.Random(8)
    checked = 0
    for _ in range(40):
        a, b, c = small_instance(rng)
        if c.size < 5 and arrow_check(c, b, a).holds:
            bigger = with_new_top(c)
            assert is_embedding(tuple(range(c.size)), c, bigger)
            assert arrow_check(bigger, b, a).holds
            checked += 1
    assert checked


def with_new_top(x):
    """x plus one element lying above every element in every slot."""
    n = x.size + 1
    top = 1 << x.size
    return Multiposet(n, tuple(Relation(n, tuple(row | top for row in r.rows) + (top,)) for r in x.relations))


def test_isomorphism_invariance():
    rng = random.Random(4)
    for _ in range(25):
        a, b, c = small_instance(rng)
        perm = list(range(c.size))
        rng.shuffle(perm)
        assert arrow_check(c, b, a).holds == arrow_check(c.permute(perm), b, a).holds


def test_parallel_matches_sequential():
    for c, b, a, k in [(chain(5), chain(3), chain(2), 2), (chain(6), chain(3), chain(2), 2),
                       (chain(6), chain(3), point(), 3), (chain(7), chain(3), point(), 3)]:
        assert arrow_check(c, b, a, k, workers=1) == arrow_check(c, b, a, k, workers=2)


def test_witness_search_examples():
    found = ramsey_witness_search(ClassSpec.ch(), chain(2), chain(3), max_n=7)
    assert found is not None and found[0].size == 6
    found = ramsey_witness_search(ClassSpec.ch(), point(), chain(2), k=3, max_n=5)
    assert found[0].size == 4
    assert ramsey_witness_search(ClassSpec.ch(), chain(2), chain(3), max_n=5) is None
    with pytest.raises(MultiposetError):
        ramsey_witness_search(ClassSpec.ch(), antichain(2), chain(3))


def test_witness_search_in_template_class():
    spec = ClassSpec.k(preset_template("d:2"))
    a = point(2)
    b = Multiposet(2, (Relation.chain([0, 1]), Relation.chain([1, 0])))
    c, res = ramsey_witness_search(spec, a, b, max_n=5)
    assert res.holds and is_member(spec, c) and first_embedding(b, c) is not None


def test_hp_jep_sap_for_chains_and_epos():
    for spec in (ClassSpec.ch(), ClassSpec.epos(), ClassSpec.k(preset_template("b"))):
        assert has_hp_upto(spec, 3)
        assert has_jep_upto(spec, 2)
        assert has_sap_upto(spec, 2)


def test_even_chains_fail_heredity():
    even = ClassSpec.custom(ClassSpec.ch(), lambda x: x.size % 2 == 0, "even chains")
    assert not has_hp_upto(even, 4)


def test_chain_amalgam_over_bottom_point():
    # gluing two 2-chains along their bottom point forces an order between the tops
    a, b = point(), chain(2)
    amalgam = strong_amalgam(ClassSpec.ch(), a, b, b, (0,), (0,))
    assert amalgam is not None
    assert amalgam.d.size == 3
    assert is_embedding(amalgam.g1, b, amalgam.d) and is_embedding(amalgam.g2, b, amalgam.d)
    assert amalgam.g1[0] == amalgam.g2[0]


def test_strong_amalgam_sizes_and_commutation():
    spec = ClassSpec.epos()
    members = [x for n in (1, 2, 3) for x in enumerate_class(spec, n)]
    for a in members[:3]:
        for b in members:
            for c in members:
                for f1 in enumerate_embeddings(a, b):
                    for f2 in enumerate_embeddings(a, c):
                        got = strong_amalgam(spec, a, b, c, f1, f2)
                        assert got is not None
                        assert got.d.size == b.size + c.size - a.size
                        assert is_member(spec, got.d)
                        assert all(got.g1[f1[x]] == got.g2[f2[x]] for x in range(a.size))


def test_joint_embedding_examples():
    split = Multiposet(2, (Relation.diagonal(2), Relation.chain([0, 1])))
    both = joint_embedding(ClassSpec.epos(), chain(2, 2), split)
    assert both is not None and both.size == 3
