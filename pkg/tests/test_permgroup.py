import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from conftest import permutations, small_groups
from fsubnormal import InvalidPermutation, NotNormal, OrderCapExceeded, Permutation, SubgroupNotContained, closure
from fsubnormal.builder import cyclic, symmetric
from fsubnormal.permgroup import (
    as_subgroup,
    centralizer,
    conjugate,
    conjugacy_classes_of_subgroups,
    core,
    generate,
    interval,
    intersection,
    is_normal,
    join,
    maximal_overgroups,
    maximal_subgroups,
    minimal_overgroups,
    normal_closure,
    normalizer,
    product_set,
    quotient,
)
from fsubnormal.structure import derived_subgroup, normal_subgroups, sylow


def cyc(n, *cycles):
    return Permutation.from_cycles(n, *cycles)


def tuples(G):
    return frozenset(tuple(r) for r in G.elements.tolist())


def sub_tuples(S):
    return oracle.rows(S)


# Permutation -----------------------------------------------------------------


def test_permutation_rejects_non_bijection():
    with pytest.raises(InvalidPermutation):
        Permutation([1, 1, 2])
    with pytest.raises(InvalidPermutation):
        Permutation([0, 1, 2])


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(permutations(n), permutations(n), permutations(n))))
def test_permutation_group_axioms(triple):
    p, q, r = triple
    assert (p * q) * r == p * (q * r)
    assert (p * p.inverse()).is_identity()
    assert p.order() == oracle.element_order(tuple(i - 1 for i in p.images))


def test_composition_applies_left_factor_first():
    p, q = cyc(3, (1, 2)), cyc(3, (2, 3))
    # 1 -p-> 2 -q-> 3
    assert (p * q)(1) == 3


# closure ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "degree,gens,order",
    [(3, [cyc(3, (1, 2)), cyc(3, (1, 2, 3))], 6), (4, [], 1), (4, [cyc(4, (1, 2, 3, 4)), cyc(4, (1, 2))], 24)],
)
def test_closure_orders(degree, gens, order):
    G = closure(degree, gens)
    assert G.order == order
    assert G.order == len(oracle.closure([tuple(i - 1 for i in g.images) for g in gens], degree))


def test_closure_respects_cap():
    with pytest.raises(OrderCapExceeded):
        closure(5, [cyc(5, (1, 2, 3, 4, 5)), cyc(5, (1, 2))], cap=100)


@given(small_groups())
def test_closure_matches_naive_fixpoint(G):
    gens = [tuple(i - 1 for i in g.images) for g in G.generators]
    assert tuples(G) == oracle.closure(gens, G.degree)
    assert math.factorial(G.degree) % G.order == 0
    assert G.elements[0].tolist() == list(range(G.degree))
    # canonical order is lexicographic
    assert [tuple(r) for r in G.elements.tolist()] == sorted(tuples(G))


@given(small_groups(max_degree=5))
def test_generated_subgroups_are_closed(G):
    rng = np.random.default_rng(G.order)
    idx = rng.integers(0, G.order, size=2)
    H = generate(G, [int(i) for i in idx])
    assert oracle.is_subgroup(sub_tuples(H))
    assert G.order % H.order == 0


# normalizer, centralizer, products ------------------------------------------------


def test_normalizer_examples(s4):
    H = s4.subgroup([cyc(4, (1, 2, 3))])
    assert normalizer(s4, H).order == 6
    assert normalizer(s4, s4.whole) == s4.whole
    P = sylow(s4, 2)
    assert normalizer(s4, P) == P


def test_centralizer_examples(s3, intro):
    assert centralizer(s3, s3.subgroup([cyc(3, (1, 2, 3))])).order == 3
    C = cyclic(12)
    assert centralizer(C, C.subgroup([C.generators[0]])) == C.whole
    U = derived_subgroup(derived_subgroup(intro))
    assert U.order == 49
    assert centralizer(intro, U) == U


@given(small_groups(max_degree=5), st.data())
def test_normalizer_and_centralizer_match_brute_force(G, data):
    i = data.draw(st.integers(0, G.order - 1))
    j = data.draw(st.integers(0, G.order - 1))
    H = generate(G, [i, j])
    Gt, Ht = tuples(G), sub_tuples(H)
    N = normalizer(G, H)
    assert sub_tuples(N) == oracle.normalizer(Gt, Ht)
    assert H <= N and is_normal(H, N)
    assert sub_tuples(centralizer(G, H)) == oracle.centralizer(Gt, Ht)


def test_subgroup_from_another_parent_is_rejected(s3, s4):
    with pytest.raises(SubgroupNotContained):
        normalizer(s4, s3.whole)


def test_product_set_examples(s4):
    V4 = next(N for N in normal_subgroups(s4) if N.order == 4)
    C3 = s4.subgroup([cyc(4, (1, 2, 3))])
    elems, closed = product_set(V4, C3)
    assert closed and len(elems) == 12
    a, b, c = (s4.subgroup([cyc(4, t)]) for t in [(1, 2), (3, 4), (2, 3)])
    elems, closed = product_set(a, b)
    assert closed and len(elems) == 4
    elems, closed = product_set(a, c)
    assert not closed and len(elems) == 4
    assert product_set(C3, C3) == (frozenset(C3.indices.tolist()), True)


@given(small_groups(max_degree=5), st.data())
def test_product_set_and_intersection_match_brute_force(G, data):
    A = generate(G, [data.draw(st.integers(0, G.order - 1))])
    B = generate(G, [data.draw(st.integers(0, G.order - 1))])
    elems, closed = product_set(A, B)
    ref = oracle.product_set(sub_tuples(A), sub_tuples(B))
    assert {tuple(G.elements[i].tolist()) for i in elems} == ref
    assert closed == oracle.is_subgroup(ref)
    assert sub_tuples(intersection(A, B)) == sub_tuples(A) & sub_tuples(B)


# conjugation and normality ---------------------------------------------------


def test_normality_examples(s4, intro):
    V4 = s4.subgroup([cyc(4, (1, 2), (3, 4)), cyc(4, (1, 3), (2, 4))])
    assert is_normal(V4, s4)
    assert not is_normal(s4.subgroup([cyc(4, (1, 2))]), s4)
    assert not is_normal(sylow(intro, 3), intro)
    for g in range(s4.order):
        assert conjugate(V4, g) == V4


@given(small_groups(max_degree=5), st.data())
def test_conjugate_and_is_normal_match_brute_force(G, data):
    H = generate(G, [data.draw(st.integers(0, G.order - 1))])
    g = data.draw(st.integers(0, G.order - 1))
    gt = tuple(G.elements[g].tolist())
    assert sub_tuples(conjugate(H, g)) == {oracle.conj(h, gt) for h in sub_tuples(H)}
    assert is_normal(H, G) == oracle.is_normal(sub_tuples(H), tuples(G))
    K = core(G, H)
    assert is_normal(K, G) and K <= H
    assert normal_closure(G, H) >= H and is_normal(normal_closure(G, H), G)


# lattice ---------------------------------------------------------------------


def test_lattice_at_the_top(s4):
    G = s4.whole
    assert minimal_overgroups(s4, G) == []
    assert interval(s4, G) == [G]
    assert maximal_overgroups(s4, G) == []


def test_maximal_overgroups_of_a_3_cycle(s4):
    H = s4.subgroup([cyc(4, (1, 2, 3))])
    assert sorted(M.order for M in maximal_overgroups(s4, H)) == [6, 12]


def test_maximal_subgroups_of_s4(s4):
    maxes = maximal_subgroups(s4)
    assert len(maxes) == 8
    classes = conjugacy_classes_of_subgroups(s4, maxes)
    assert sorted((c[0].order, len(c)) for c in classes) == [(6, 4), (8, 3), (12, 1)]


def test_maximal_subgroups_of_prime_cyclic():
    C = cyclic(7)
    assert maximal_subgroups(C) == [C.trivial]


def test_interval_bound_is_enforced(s4):
    with pytest.raises(OrderCapExceeded):
        interval(s4, s4.trivial, bound=10)
    assert len(interval(s4, s4.trivial)) == 30


@settings(max_examples=15)
@given(small_groups(max_degree=5, max_gens=2))
def test_interval_from_trivial_matches_brute_force(G):
    subs = interval(G, G.trivial)
    assert {sub_tuples(S) for S in subs} == oracle.subgroups(tuples(G), G.degree)
    # maximal subgroups agree with the lattice definition
    proper = [S for S in subs if S.order < G.order]
    by_lattice = {S for S in proper if not any(S < T for T in proper)}
    assert set(maximal_subgroups(G)) == by_lattice


@given(small_groups(max_degree=5, max_gens=2), st.data())
def test_maximal_overgroups_filter_maximal_subgroups(G, data):
    H = generate(G, [data.draw(st.integers(0, G.order - 1))])
    assert set(maximal_overgroups(G, H)) == {M for M in maximal_subgroups(G) if H <= M}
    mins = minimal_overgroups(G, H)
    for K in interval(G, H):
        if K != H:
            assert any(M <= K for M in mins)


def test_join(s4):
    a, b = s4.subgroup([cyc(4, (1, 2))]), s4.subgroup([cyc(4, (3, 4))])
    assert join(a, b).order == 4


# quotients -------------------------------------------------------------------


def test_quotient_examples(s4, intro):
    assert quotient(s4, s4.whole).group.order == 1
    V4 = next(N for N in normal_subgroups(s4) if N.order == 4)
    Q = quotient(s4, V4)
    assert Q.group.order == 6 and Q.group.degree == 6
    U = derived_subgroup(derived_subgroup(intro))
    assert quotient(intro, U).group.order == 6


def test_quotient_requires_normal_subgroup(s4):
    with pytest.raises(NotNormal):
        quotient(s4, s4.subgroup([cyc(4, (1, 2))]))


@given(small_groups(max_degree=5))
def test_quotient_lift_round_trip(G):
    for N in normal_subgroups(G):
        q = quotient(G, N)
        assert q.group.order * N.order == G.order
        for K in interval(G, N):
            assert q.preimage(q.image(K)) == K
        # the projection is a homomorphism
        a, b = G.order - 1, G.order // 2
        assert q.element_image(G.mul(a, b)) == q.group.mul(q.element_image(a), q.element_image(b))


def test_as_subgroup_of_group_is_whole(s3):
    assert as_subgroup(s3) == s3.whole
    assert symmetric(3).order == 6
