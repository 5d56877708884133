import random
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import full_double_cosets, index_set_bruteforce, longest_in_coset, transpose_by_definition

from koszulgm.blocks import (BlockPair, CapacityError, Composition, act, all_compositions, all_pairs, compose,
                             double_coset_audit, dominated, dual_bijection, fixed_point_index_set, index_set,
                             involution_check, inverse, jay_torus, length, longest_representative,
                             single_orbit_audit, twist)

C = Composition.from_list


def pair(mu, nu):
    return BlockPair(C(mu), C(nu))


def test_composition_calculus():
    c = C((0, 2, 0, 3))
    assert c.as_list() == [2, 0, 3] and c.origin == 2
    assert c.transpose().as_list() == [2, 2, 1]
    assert c.plus().as_list() == [3, 2]
    assert c.bar().as_list() == [2, 3] and c.bar().origin == 1
    assert c.reverse()[-4] == 3 and c.reverse()[-2] == 2
    assert str(C((2, 0, 3))) == "(2, 0, 3)@1"
    with pytest.raises(ValueError):
        C((1, -1))


def test_dominance():
    assert dominated(C((1, 1, 1)), C((3,)))
    assert not dominated(C((3,)), C((1, 1, 1)))
    assert dominated(C((1, 2)), C((2, 1)))
    assert not dominated(C((2,)), C((1, 1, 1)))


def test_pair_totals_must_agree():
    with pytest.raises(ValueError):
        pair((2,), (1, 2))


def test_alpha_and_lambda():
    bp = pair((1, 2), (2, 1))
    assert bp.alpha == (-1, -1, -2)
    assert bp.lam.as_list() == [2, 1]
    assert bp.mu_blocks == [(0,), (1, 2)]


def test_small_index_sets():
    assert index_set(pair((2, 1), (1, 1, 1))) == [(-2, -3, -1), (-1, -3, -2), (-1, -2, -3)]
    assert index_set(pair((1, 2), (2, 1))) == [(-1, -1, -2)]
    assert index_set(pair((3,), (1, 1, 1))) == [(-1, -2, -3)]
    assert index_set(pair((3,), (3,))) == []


def test_regular_mu_counts_all_cosets():
    for nu in ((1, 1, 1, 1), (2, 1, 1), (2, 2), (1, 3)):
        bp = pair((1,) * 4, nu)
        assert len(index_set(bp)) == factorial(4) // prod(factorial(v) for v in nu)


def test_regular_nu_counts():
    for mu in ((2, 1, 1), (2, 2), (3, 1), (4,)):
        bp = pair(mu, (1,) * 4)
        assert len(index_set(bp)) == factorial(4) // prod(factorial(v) for v in mu)


def test_jay_torus_examples():
    jt = jay_torus(pair((1, 2), (2, 1)))
    assert jt["J"] == [(2, 3), (1, 2, 3)] and jt["dim"] == 0
    assert jay_torus(pair((3,), (1, 1, 1)))["dim"] == 0
    for n in range(1, 5):
        assert jay_torus(pair((1,) * n, (1,) * n))["dim"] == n - 1
    assert jay_torus(pair((2, 1), (1, 1, 1)))["dim"] == 1


def test_dual_bijection_example():
    rep = dual_bijection(pair((2, 1), (1, 1, 1)))
    assert rep["passed"] and rep["source_size"] == 3
    assert rep["map"] == {(-2, -3, -1): (2, 1, 1), (-1, -3, -2): (1, 2, 1), (-1, -2, -3): (1, 1, 2)}
    assert str(pair((2, 1), (1, 1, 1)).dual()) == "mu=(1, 1, 1)@1 nu=(1, 2)@-2"


def test_fixed_points_example():
    bp = pair((2, 1), (1, 1, 1))
    assert fixed_point_index_set(bp) == sorted(index_set(bp))
    assert fixed_point_index_set(bp, "upper") != sorted(index_set(bp))


def test_capacity_errors():
    big = pair((1,) * 9, (1,) * 9)
    with pytest.raises(CapacityError):
        index_set(big)
    with pytest.raises(CapacityError):
        double_coset_audit(pair((1,) * 7, (7,)))
    assert len(index_set(big, bound=9)) == factorial(9)


def test_all_compositions_count():
    assert [len(all_compositions(n)) for n in range(1, 6)] == [1, 2, 4, 8, 16]
    assert len(all_pairs(3)) == 16


@pytest.mark.parametrize("n", range(1, 6))
def test_index_sets_match_full_double_cosets(n):
    for bp in all_pairs(n):
        mu, nu = list(bp.mu.parts), list(bp.nu.parts)
        I = index_set(bp)
        assert set(I) == index_set_bruteforce(mu, nu)
        assert len(I) == full_double_cosets(mu, nu)
        assert (len(I) > 0) == dominated(bp.mu, bp.lam)
        assert double_coset_audit(bp)["passed"]


@pytest.mark.parametrize("n", range(1, 5))
def test_orbits_bijection_and_fixed_points(n):
    for bp in all_pairs(n):
        assert single_orbit_audit(bp)["passed"]
        assert dual_bijection(bp)["passed"]
        assert involution_check(bp)
        assert fixed_point_index_set(bp) == sorted(index_set(bp))


def test_longest_representatives():
    for bp in all_pairs(4):
        nu = list(bp.nu.parts)
        for x in index_set(bp):
            w = longest_representative(x, bp)
            assert act(w, bp.alpha) == x
            assert length(w) == length(longest_in_coset(x, nu))


compositions = st.lists(st.integers(0, 4), min_size=1, max_size=6).filter(lambda v: sum(v) > 0)


@given(compositions)
def test_transpose_matches_definition(values):
    c = C(values)
    assert c.transpose().as_list() == transpose_by_definition(values)
    assert c.transpose().transpose() == c.plus()


@given(compositions, st.integers(-3, 3))
def test_reverse_and_bar(values, origin):
    c = C(values, origin)
    assert c.reverse().reverse() == c
    assert c.bar().nonzero() == c.nonzero() == c.reverse().nonzero()[::-1]
    assert c.n == sum(values)


@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_permutation_helpers(n, seed):
    rng = random.Random(seed)
    u, v = list(range(n)), list(range(n))
    rng.shuffle(u)
    rng.shuffle(v)
    u, v = tuple(u), tuple(v)
    x = tuple(range(10, 10 + n))
    assert act(compose(u, v), x) == act(u, act(v, x))
    assert compose(u, inverse(u)) == tuple(range(n))
    assert length(inverse(u)) == length(u)


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_twist_is_an_involution_on_index_sets(n, seed):
    rng = random.Random(seed)
    bp = rng.choice(all_pairs(n))
    I = index_set(bp)
    for x in I:
        assert twist(twist(x)) == x
    # conjugation by w0 reverses both compositions
    rev = BlockPair(bp.mu.reverse(), bp.nu.reverse())
    assert {twist(x) for x in index_set(rev)} == set(I)
