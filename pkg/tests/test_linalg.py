from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import bareiss_rank, nullspace

from koszulgm.linalg import (AmbientMismatch, RationalMatrix, Subspace, annihilator, fmt, intersect, kernel,
                             rank, reduce, solve, sparse_rref)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # bias toward low rank so kernels and dependencies actually occur
    rows = draw(st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=r, max_size=r))
    if draw(st.booleans()) and r > 1:
        rows[-1] = [a + b for a, b in zip(rows[0], rows[1 % r])]
    return RationalMatrix.from_rows(rows, c)


@st.composite
def subspaces(draw, n=None):
    n = n or draw(st.integers(1, 5))
    vecs = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), max_size=n))
    return Subspace.span(vecs, n)


def test_reduce_identity_and_proportional():
    assert reduce(RationalMatrix.identity(3)) == RationalMatrix.identity(3)
    m = reduce(RationalMatrix.from_rows([[2, 4], [1, 2]]))
    assert m.tolists() == [[1, 2], [0, 0]]
    assert m.rank() == 1


def test_kernel_examples():
    assert kernel(RationalMatrix.zeros(2, 3)) == Subspace.full(3)
    k = kernel(RationalMatrix.from_rows([[1, 1, 1]]))
    assert k.dim == 2 and k.contains([1, -1, 0])


def test_annihilator_examples():
    assert annihilator(Subspace.zero(3)) == Subspace.full(3)
    a = annihilator(Subspace.span([[1, 1, 1]], 3))
    assert a.dim == 2
    assert all(sum(v) == 0 for v in a.basis)


def test_intersect_coordinate_planes():
    xy = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    yz = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    assert intersect(xy, yz) == Subspace.span([[0, 1, 0]], 3)


def test_ambient_mismatch_is_an_error():
    with pytest.raises(AmbientMismatch):
        Subspace.span([[1, 2]], 3)
    with pytest.raises(AmbientMismatch):
        _ = Subspace.full(2) + Subspace.full(3)


def test_solve_and_inverse():
    m = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert solve(m, [3, 2]) == (1, 1)
    assert m @ m.inverse() == RationalMatrix.identity(2)
    assert solve(RationalMatrix.from_rows([[1, 1], [2, 2]]), [1, 3]) is None


def test_fmt():
    assert fmt(Fraction(-3, 6)) == "-1/2"
    assert fmt(Fraction(4)) == "4"


@given(matrices())
def test_reduce_idempotent_rank_preserving(m):
    r = reduce(m)
    assert reduce(r) == r
    assert r.rank() == m.rank() == bareiss_rank(m.entries, m.cols)


@given(matrices())
def test_kernel_is_annihilated_and_rank_nullity(m):
    k = kernel(m)
    for v in k.basis:
        assert all(x == 0 for x in m.apply(v))
    assert k.dim + m.rank() == m.cols
    assert k.dim == len(nullspace(m.entries, m.cols))


@given(subspaces())
def test_annihilator_involution(s):
    a = annihilator(s)
    assert a.dim + s.dim == s.ambient_dim
    assert annihilator(a) == s


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_intersection_dimension_formula(pair):
    a, b = pair
    i = intersect(a, b)
    assert intersect(a, a) == a
    assert i.dim == a.dim + b.dim - (a + b).dim
    assert a.contains_space(i) and b.contains_space(i)


@given(matrices())
def test_sparse_rref_matches_dense(m):
    piv = sparse_rref({j: x for j, x in enumerate(r) if x} for r in m.entries)
    dense = [list(r) for r in reduce(m).entries if any(r)]
    got = [[piv[p].get(j, 0) for j in range(m.cols)] for p in sorted(piv)]
    assert got == dense
    assert len(piv) == rank(m.entries, m.cols)
