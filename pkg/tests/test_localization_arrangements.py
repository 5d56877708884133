import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszulgm.algebra import format_element
from koszulgm.arrangements import (DegenerateArrangement, DualityCertificate, FiberedArrangement, LocalizationAlgebra,
                                   check_duality, dual_arrangement, equivalent, fibered, find_linear_isomorphism,
                                   first_duality_certificate, p2_localization, two_lines_localization)
from koszulgm.builtins import a_rs, shipped
from koszulgm.linalg import RationalMatrix, Subspace, annihilator
from koszulgm.localization import (NotFlexible, canonical_pairing, character_j, cocycle_check, diagnostics, dual_order,
                                   is_flexible, localization_algebra, up_down_lift)


def loc(name):
    return localization_algebra(shipped(name).extra["order"])


@pytest.fixture(scope="module")
def a11():
    return loc("a11")


@pytest.fixture(scope="module")
def sl3():
    return loc("sl3")


def test_a11_center_and_characters(a11):
    assert [len(a11.center[d]) for d in range(5)] == [1, 0, 2, 0, 2]
    assert [format_element(z) for z in a11.center[2]] == ["u1@2 + x*y", "u1@1 + u1@2"]
    # xy + u e2 kills V~_1 and acts by u on V~_2; the lifted unit u acts by u everywhere
    assert a11.la.h["1"].tolists() == [[0, 1]]
    assert a11.la.h["2"].tolists() == [[1, 1]]
    assert a11.la.check() == []


def test_a11_j_map(a11):
    assert [format_element(z) for z in a11.zA2] == ["x*y"]
    assert character_j(a11, "1", "2").tolists() == [[1]]
    assert character_j(a11, "2", "1").tolists() == [[-1]]
    assert character_j(a11, "1", "1").tolists() == [[0]]
    assert cocycle_check(a11)


def test_sl3_center(sl3):
    assert sl3.la.dim_u == 2 and sl3.la.dim_z == 3
    assert [len(sl3.center[d]) for d in (0, 2, 4)] == [1, 3, 6]
    assert cocycle_check(sl3)
    assert character_j(sl3, "1", "3").tolists() == [[-1], [-1]]


def test_up_down_lifts(a11, sl3):
    mu, nu = up_down_lift(a11, a11.zA2[0])
    assert mu == {("x", "y"): 1} and nu == {("1", "1", ("x", "y")): 1}
    mu, _ = up_down_lift(sl3, sl3.zA2[0])
    assert mu == {("y1", "x1"): 1, ("y2", "x2"): 1}
    assert up_down_lift(a11, {}) == ({}, {})


def test_diagnostics(a11):
    d = diagnostics(a11, True)
    assert d["flexible"] and d["malleable"] is True and d["strong"] and d["free"]
    assert d["numerator"] == [1, 0, 1, 0, 0]
    assert diagnostics(a11)["malleable"] == "not applicable"
    bad = diagnostics(localization_algebra(a_rs(1, 2)), True)
    assert not bad["flexible"] and not bad["free"] and bad["malleable"] == "indistinguishable to cap"


def test_a12_is_not_flexible():
    ql = localization_algebra(a_rs(1, 2))
    assert not is_flexible(ql) and ql.la.j is None
    with pytest.raises(NotFlexible):
        character_j(ql, "1", "2")


def test_semisimple_has_trivial_degree_two():
    ql = loc("semisimple")
    assert ql.la.dim_u == 0 and ql.la.dim_z == 0
    d = diagnostics(ql, True)
    assert all(d[k] is True for k in ("flexible", "malleable", "strong", "free"))
    assert len(ql.center[0]) == 3


def test_sl3_pairing_is_perfect_and_index_free(sl3):
    qd = localization_algebra(dual_order(sl3.op))
    pair = canonical_pairing(sl3, qd)
    assert pair["agree"] and pair["perfect"] and pair["certificate"].pairing.rank() == 3


def test_p2_arrangement():
    fa = fibered(p2_localization())
    assert fa.kernel() == Subspace.span([[1, 1, 1]], 3)
    # H at the fixed point off L_k is the coordinate hyperplane c_k = 0
    for k, name in enumerate(fa.index):
        assert fa.H(name) == annihilator(Subspace.span([[int(i == k) for i in range(3)]], 3))


def test_two_lines_arrangement():
    fa = fibered(two_lines_localization())
    assert fa.kernel() == annihilator(Subspace.span([[1, 1, 1]], 3))
    for k, name in enumerate(fa.index):
        assert fa.H(name) == Subspace.span([[int(i == k) for i in range(3)]], 3)


def test_dual_of_p2_is_two_lines():
    cert = first_duality_certificate()
    d = dual_arrangement(fibered(p2_localization()))
    t = fibered(two_lines_localization())
    assert d.kernel() == t.kernel()
    assert all(d.H(a) == t.H(b) for a, b in cert.bijection.items())


def test_shipped_sl3_arrangements_match_p2_and_two_lines(sl3):
    assert find_linear_isomorphism(fibered(sl3.la), fibered(p2_localization())) is not None
    assert find_linear_isomorphism(fibered(sl3.la), fibered(two_lines_localization())) is None


def test_first_certificate_passes_and_a_wrong_bijection_fails():
    p2, tl = p2_localization(), two_lines_localization()
    assert check_duality(p2, tl, first_duality_certificate())["passed"]
    shifted = DualityCertificate(RationalMatrix.identity(3), {"L2L3": "p2", "L1L3": "p3", "L1L2": "p1"})
    rep = check_duality(p2, tl, shifted)
    assert not rep["passed"] and rep["kernels"]
    assert "H_L2L3 is not perpendicular to H^vee_p2" in rep["witnesses"]


def test_degenerate_pairing_fails():
    cert = DualityCertificate(RationalMatrix.zeros(3, 3), first_duality_certificate().bijection)
    rep = check_duality(p2_localization(), two_lines_localization(), cert)
    assert not rep["passed"] and rep["witnesses"]


def test_h_not_identity_on_u_is_reported():
    la = two_lines_localization()
    bad = LocalizationAlgebra(la.index, la.u_names, la.z_names, la.incl,
                              {**la.h, "p1": RationalMatrix.from_rows([[2, 0, 0]])})
    assert bad.check() == ["h_p1 is not the identity on U"]


def test_projection_must_be_surjective():
    with pytest.raises(DegenerateArrangement):
        FiberedArrangement(2, RationalMatrix.from_rows([[1, 1], [2, 2]]), ())
    with pytest.raises(DegenerateArrangement):
        FiberedArrangement(2, RationalMatrix.from_rows([[1, 0]]), (("a", Subspace.span([[0, 1]], 2)),))


def random_arrangement(rng: random.Random) -> FiberedArrangement:
    n = rng.randint(1, 4)
    f = rng.randint(0, n)
    while True:
        proj = RationalMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(f)], n) \
            if f else RationalMatrix(0, n, ())
        if proj.rank() == f:
            break
    subs = []
    while len(subs) < rng.randint(1, 3):
        H = Subspace.span([[rng.randint(-2, 2) for _ in range(n)] for _ in range(f)], n)
        try:
            FiberedArrangement(n, proj, ((0, H),))
        except DegenerateArrangement:
            continue
        subs.append((len(subs), H))
    return FiberedArrangement(n, proj, tuple(subs))


@given(st.integers(0, 10 ** 6))
def test_dual_arrangement_is_an_involution(seed):
    fa = random_arrangement(random.Random(seed))
    d = dual_arrangement(fa)
    assert d.kernel().dim == fa.dim_e - fa.kernel().dim
    assert equivalent(dual_arrangement(d), fa)


@given(st.integers(0, 10 ** 6))
def test_linear_isomorphism_recovers_a_change_of_basis(seed):
    rng = random.Random(seed)
    fa = random_arrangement(rng)
    n = fa.dim_e
    while True:
        T = RationalMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
        if T.rank() == n:
            break
    Tinv = T.inverse()
    # moving H by T and the kernel by T means precomposing the projection with T^-1
    moved = FiberedArrangement(n, fa.projection @ Tinv,
                               tuple((a, Subspace.span([T.apply(v) for v in H.basis], n)) for a, H in fa.subspaces))
    assert moved.kernel() == Subspace.span([T.apply(v) for v in fa.kernel().basis], n)
    assert find_linear_isomorphism(fa, moved) is not None


@pytest.mark.parametrize("name", ["a11", "sl3_dual", "semisimple"])
def test_flexible_on_both_sides(name):
    op = shipped(name).extra["order"]
    ql = localization_algebra(op)
    qd = localization_algebra(dual_order(op))
    assert is_flexible(ql) and is_flexible(qd)
    if ql.la.dim_z:
        assert check_duality(ql.la, qd.la, canonical_pairing(ql, qd)["certificate"])["passed"]


@pytest.mark.parametrize("r,s", [(1, 2), (2, 1)])
def test_a_rs_off_diagonal_not_flexible_on_either_side(r, s):
    op = a_rs(r, s)
    assert not is_flexible(localization_algebra(op))
    assert not is_flexible(localization_algebra(dual_order(op)))


def test_characters_evaluate_units_to_identity(sl3):
    for a in sl3.index:
        assert sl3.la.h[a] @ sl3.la.incl.transpose() == RationalMatrix.identity(2)
