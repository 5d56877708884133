import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszulgm.algebra import format_element
from koszulgm.builtins import a_rs, shipped, standard_koszul_builtins
from koszulgm.deformation import (DeformationError, arbitrary_psi, bg_flatness_check, build_deformed_algebra,
                                  factors_through_dual_center, from_psi, random_psi, relation_rows, specialize,
                                  universal_deformation)
from koszulgm.highest_weight import koszul_certificate
from koszulgm.quiver import Arrow, QuadraticPresentation, Quiver


def non_central(dp):
    """Deformed relations other than the ones making the u letters central."""
    return [r for r in dp.deformed_relations()
            if not all(len(w) == 2 and any(a.startswith("u") for a in w) for w in r)]


def test_a11_universal():
    dp = universal_deformation(shipped("a11").data)
    assert dp.universal and dp.dim_u == 1
    assert non_central(dp) == [{("y", "x"): 1, ("u1@2",): -1}]


@pytest.mark.parametrize("r,s", [(1, 2), (2, 2), (3, 2)])
def test_a_rs_universal(r, s):
    dp = universal_deformation(a_rs(r, s).presentation)
    assert dp.dim_u == r * s
    rels = non_central(dp)
    assert len(rels) == r * s
    us = set()
    for rel in rels:
        (w, c), (u, d) = sorted(rel.items(), key=lambda kv: len(kv[0]), reverse=True)
        assert w[0].startswith("y") and w[1].startswith("x") and c == 1 and d == -1
        assert u[0].endswith("@2")
        us.add(u[0])
    assert len(us) == r * s


def test_no_relations_means_trivial_base():
    q = Quiver(("1", "2"), (Arrow("x", "1", "2"),))
    dp = universal_deformation(QuadraticPresentation.from_relations(q, []))
    assert dp.dim_u == 0
    D = build_deformed_algebra(dp, 3)
    assert D.flat and D.alg.dims[:2] == [2, 1]


def test_from_psi_identity_and_zero():
    p = shipped("a11").data
    uni = universal_deformation(p)
    same = from_psi(p, [[1]])
    assert same.universal and same.deformed_relations() == uni.deformed_relations()
    zero = from_psi(p, [[0]])
    assert not zero.universal
    assert non_central(zero) == [{("y", "x"): 1}]
    with pytest.raises(DeformationError):
        from_psi(p, [[1, 2]])


def test_from_psi_one_dimensional_on_a22():
    p = a_rs(2, 2).presentation
    c = [[2, -1, 3, 5]]
    dp = from_psi(p, c)
    assert dp.dim_u == 1
    uni = universal_deformation(p)
    for rel, urel in zip(non_central(dp), non_central(uni)):
        word = next(w for w in urel if len(w) == 2)
        k = int(next(w for w in urel if len(w) == 1)[0][1]) - 1
        assert rel == {word: 1, ("u1@2",): -Fraction(c[0][k])}


def test_bg_examples():
    assert bg_flatness_check(universal_deformation(shipped("a11").data))["bg_passed"]
    sd = shipped("sl3_dual").data
    zero = arbitrary_psi(sd, [[0]] * len(relation_rows(sd)))
    assert bg_flatness_check(zero)["bg_passed"]
    # the universal values are (0, 1, 0, 1); keeping only the first loop relation breaks factoring
    assert [r for r in universal_deformation(sd).psi_rows] == [(0,), (1,), (0,), (1,)]
    bad = arbitrary_psi(sd, [[0], [1], [0], [0]])
    rep = bg_flatness_check(bad)
    assert rep["bg_passed"] is False and rep["factors_through_center"] is False and rep["agree"]
    assert not factors_through_dual_center(bad)


def test_off_diagonal_psi_rejected():
    p = shipped("sl3_dual").data
    with pytest.raises(DeformationError, match="off-diagonal"):
        arbitrary_psi(p, [[1], [0], [0], [0]])


def test_deformed_a11_degree_two():
    D = build_deformed_algebra(universal_deformation(shipped("a11").data))
    assert sorted(format_element({m: 1}) for m in D.alg.basis[2]) == ["u1@1", "u1@2", "x*y"]
    assert D.alg.dims == [2, 2, 3, 2, 3] and D.flat


def test_deformed_sl3_degree_two():
    D = build_deformed_algebra(universal_deformation(shipped("sl3").data))
    assert D.dp.dim_u == 2 and D.alg.dims[2] == 10 and D.flat


def test_zero_psi_audit_passes():
    for name, op in standard_koszul_builtins().items():
        p = op.presentation
        dp = arbitrary_psi(p, [[0, 0]] * len(relation_rows(p))) if relation_rows(p) else arbitrary_psi(p, [])
        assert build_deformed_algebra(dp).flat, name


def test_specialize_a11():
    dp = universal_deformation(shipped("a11").data)
    one = specialize(dp, [1])
    assert one["dim"] == 5 and one["gr_isomorphic_to_A"]
    zero = specialize(dp, [0])
    assert zero["gr_dims"] == [2, 2, 1]


def test_counterexample_drops_dimension():
    inst = shipped("counterexample")
    dp = arbitrary_psi(inst.data, inst.extra["psi"])
    assert bg_flatness_check(dp)["bg_passed"]
    D = build_deformed_algebra(dp)
    assert [r["degree"] for r in D.audit if not r["passed"]] == [4, 5]
    sp = specialize(dp, [1])
    assert sp["dim"] == 4 and sp["gr_dims"] == [1, 2, 1] and not sp["gr_isomorphic_to_A"]


@pytest.mark.parametrize("name", ["a11", "a12", "sl3", "sl3_dual"])
def test_setting_u_to_zero_recovers_a(name):
    D = build_deformed_algebra(universal_deformation(shipped(name).data))
    assert D.reduction_failures() == []


@given(st.sampled_from(sorted(standard_koszul_builtins())), st.integers(0, 10 ** 6))
def test_bg_implies_flat_on_koszul_instances(name, seed):
    op = standard_koszul_builtins()[name]
    p = op.presentation
    rng = random.Random(seed)
    dp = random_psi(p, rng.randint(1, 2), rng, -2, 2)
    rep = bg_flatness_check(dp)
    assert rep["agree"]
    D = build_deformed_algebra(dp)
    if rep["bg_passed"]:
        assert D.flat
    else:
        assert not factors_through_dual_center(dp)
    if not D.flat:
        assert not rep["bg_passed"] or not koszul_certificate(op)["koszul"]


@given(st.integers(0, 10 ** 6))
def test_from_psi_is_substitution(seed):
    rng = random.Random(seed)
    r, s = rng.randint(1, 2), rng.randint(1, 2)
    p = a_rs(r, s).presentation
    uni = universal_deformation(p)
    psi = [[rng.randint(-2, 2) for _ in range(uni.dim_u)] for _ in range(rng.randint(1, 2))]
    dp = from_psi(p, psi)
    chi = [rng.randint(-2, 2) for _ in psi]
    # chi o psi' is a point of the universal base
    pulled = [sum(chi[i] * psi[i][k] for i in range(len(psi))) for k in range(uni.dim_u)]
    a, b = specialize(dp, chi), specialize(uni, pulled)
    assert a["gr_dims"] == b["gr_dims"]
    assert build_deformed_algebra(dp).flat
