"""Polarized arrangements (V, eta, xi): chambers, bases, Gale duality.

V is a k-dimensional subspace of Q^n, eta a class in Q^n / V and xi a
class in (Q^n)^* / V^perp; all three are stored in canonical form.  The
affine space V_eta = eta + V is cut by the coordinate hyperplanes and the
chamber of a sign vector alpha is {x in V_eta : alpha_i x_i >= 0}.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fm
from .arrangements import FiberedArrangement, dual_arrangement, equivalent
from .linalg import RationalMatrix, Subspace, annihilator, kernel_rows, rank, solve


class GenericityError(ValueError):
    def __init__(self, msg: str, subset=()):
        super().__init__(msg)
        self.subset = tuple(subset)


def sign_str(alpha: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in alpha)


@dataclass(frozen=True)
class PolarizedArrangement:
    n: int
    V: Subspace
    eta: tuple
    xi: tuple

    @classmethod
    def make(cls, rows: Sequence[Sequence], eta: Sequence, xi: Sequence, n: int | None = None) -> "PolarizedArrangement":
        n = len(eta) if n is None else n
        V = Subspace.span(rows, n)
        eta = V.residue(eta)
        xi = annihilator(V).residue(xi)
        return cls(n, V, tuple(eta), tuple(xi))

    @property
    def k(self) -> int:
        return self.V.dim

    def point(self, t: Sequence) -> tuple:
        """eta + sum t_j v_j."""
        return tuple(self.eta[i] + sum((tj * v[i] for tj, v in zip(t, self.V.basis)), Fraction(0)) for i in range(self.n))

    def xi_of(self, x: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(self.xi, x)), Fraction(0))

    def chamber_constraints(self, alpha: Sequence[int]) -> list:
        """alpha_i (eta_i + sum_j t_j v_ji) >= 0, as a . t <= b."""
        cons = []
        for i in range(self.n):
            a = tuple(-alpha[i] * v[i] for v in self.V.basis)
            cons.append((a, alpha[i] * self.eta[i]))
        return cons

    def xi_on_t(self) -> tuple:
        return tuple(self.xi_of(v) for v in self.V.basis)

    def solve_basis(self, b: Sequence[int]):
        """The point of V_eta with x_i = 0 for i in b, or None when the coordinates on b are not a basis."""
        if len(b) != self.k:
            return None
        mat = RationalMatrix.from_rows([[v[i] for v in self.V.basis] for i in b], self.k) if self.k else None
        if mat is None:
            return self.point(())
        if mat.rank() != self.k:
            return None
        t = solve(mat, [-self.eta[i] for i in b])
        return self.point(t)


@dataclass(frozen=True)
class Chamber:
    alpha: tuple
    feasible: bool
    bounded: bool
    vertex: tuple | None = None
    basis: tuple | None = None

    @property
    def name(self) -> str:
        return sign_str(self.alpha)


def validate(pa: PolarizedArrangement) -> dict:
    """Simplicity of the induced arrangement and genericity of xi, by exact rank tests."""
    n, k = pa.n, pa.k
    cols = [[v[i] for v in pa.V.basis] for i in range(n)]  # coordinate functionals restricted to V
    for size in range(1, min(k, n) + 1):
        for S in itertools.combinations(range(n), size):
            if rank([cols[i] for i in S], k) != size:
                raise GenericityError(f"hyperplanes {[i + 1 for i in S]} do not meet in codimension {size}", S)
            if size < k:
                # xi must be nonconstant on {v in V : v_S = 0}
                mat = [cols[i] for i in S] + [list(pa.xi_on_t())]
                if rank(mat, k) == size:
                    raise GenericityError(f"xi is constant on the flat cut out by {[i + 1 for i in S]}", S)
    for S in itertools.combinations(range(n), k + 1):
        mat = RationalMatrix.from_rows([cols[i] for i in S], k) if k else None
        rhs = [-pa.eta[i] for i in S]
        sol = solve(mat, rhs) if mat is not None else (() if not any(rhs) else None)
        if sol is not None:
            raise GenericityError(f"{k + 1} hyperplanes {[i + 1 for i in S]} share a point", S)
    if k >= 1 and not any(pa.xi_on_t()):
        raise GenericityError("xi is constant on V_eta")
    return {"passed": True, "n": n, "k": k}


def enumerate_chambers(pa: PolarizedArrangement) -> list[Chamber]:
    """All sign vectors with feasibility, boundedness and, on I, the unique xi-maximal vertex."""
    out = []
    k = pa.k
    c = pa.xi_on_t()
    for alpha in itertools.product((1, -1), repeat=pa.n):
        cons = pa.chamber_constraints(alpha)
        status, val = fm.maximize(cons, c, k)
        if status == "infeasible":
            out.append(Chamber(alpha, False, False))
            continue
        if status == "unbounded":
            out.append(Chamber(alpha, True, False))
            continue
        vertex, basis = None, None
        for b in itertools.combinations(range(pa.n), k):
            p = pa.solve_basis(b)
            if p is None or any(alpha[i] * p[i] < 0 for i in range(pa.n)):
                continue
            if pa.xi_of(p) - pa.xi_of(pa.eta) == val:
                vertex, basis = p, tuple(i for i in range(pa.n) if p[i] == 0)
                break
        if vertex is None or len(basis) != k:
            raise GenericityError(f"no simple optimal vertex for chamber {sign_str(alpha)}")
        _certify_unique(pa, alpha, vertex, basis)
        out.append(Chamber(alpha, True, True, vertex, basis))
    return out


def _certify_unique(pa: PolarizedArrangement, alpha, p, b):
    """xi = const + sum_{i in b} c_i x_i on V_eta; p is the unique maximum iff alpha_i c_i < 0."""
    k = pa.k
    if k == 0:
        return
    mat = RationalMatrix.from_rows([[v[i] for v in pa.V.basis] for i in b], k)
    # c^T (pi_b iota) = xi on the V basis
    sol = solve(mat.transpose(), list(pa.xi_on_t()))
    for ci, i in zip(sol, b):
        if not alpha[i] * ci < 0:
            raise GenericityError(f"optimum of chamber {sign_str(alpha)} is not unique", b)


def index_set(chambers: Sequence[Chamber]) -> list[Chamber]:
    return [ch for ch in chambers if ch.feasible and ch.bounded]


def gale_dual(pa: PolarizedArrangement) -> PolarizedArrangement:
    """(V^perp, -xi, -eta)."""
    Vp = annihilator(pa.V)
    return PolarizedArrangement.make(Vp.basis, [-x for x in pa.xi], [-x for x in pa.eta], pa.n)


def fibered_from_polarized(pa: PolarizedArrangement, chambers: Sequence[Chamber] | None = None) -> FiberedArrangement:
    """E = (Q^n)^*, F = V^*, H_alpha = coordinate subspace on b_alpha."""
    chambers = enumerate_chambers(pa) if chambers is None else chambers
    proj = RationalMatrix(pa.k, pa.n, pa.V.basis)
    subs = []
    for ch in index_set(chambers):
        subs.append((ch.name, Subspace.span([[int(i == j) for i in range(pa.n)] for j in ch.basis], pa.n)))
    return FiberedArrangement(pa.n, proj, tuple(subs))


def hypotheses(pa: PolarizedArrangement) -> dict:
    n = pa.n
    line = any(pa.V.contains([int(i == j) for i in range(n)]) for j in range(n))
    hyper = any(all(v[j] == 0 for v in pa.V.basis) for j in range(n))
    return {"contains_coordinate_line": line, "in_coordinate_hyperplane": hyper}


def gale_consistency(pa: PolarizedArrangement) -> dict:
    hyp = hypotheses(pa)
    rep = {"hypotheses": hyp, "flagged": hyp["contains_coordinate_line"] or hyp["in_coordinate_hyperplane"]}
    ch = enumerate_chambers(pa)
    I = {c.alpha: c for c in index_set(ch)}
    try:
        du = gale_dual(pa)
        validate(du)
        dch = enumerate_chambers(du)
    except GenericityError as e:
        rep.update({"passed": not rep["flagged"] and False, "dual_generic": False, "reason": str(e)})
        if rep["flagged"]:
            rep["passed"] = None
        return rep
    Id = {c.alpha: c for c in index_set(dch)}
    rep["index_sets_equal"] = set(I) == set(Id)
    rep["bases_complementary"] = rep["index_sets_equal"] and all(
        set(Id[a].basis) == set(range(pa.n)) - set(I[a].basis) for a in I)
    fa, fd = fibered_from_polarized(pa, ch), fibered_from_polarized(du, dch)
    rep["arrangements_dual"] = equivalent(dual_arrangement(fa), fd)
    pts = [I[a].vertex for a in sorted(I)]
    diffs = [[q[i] - pts[0][i] for i in range(pa.n)] for q in pts[1:]]
    inV = all(pa.V.contains(d) for d in diffs)
    spans = Subspace.span(diffs, pa.n) == pa.V if diffs else pa.k == 0
    rep["differences_in_V"] = inV
    rep["differences_span_V"] = spans
    core = rep["index_sets_equal"] and rep["bases_complementary"] and rep["arrangements_dual"] and inV
    rep["passed"] = core and (spans or rep["flagged"])
    rep["size"] = len(I)
    return rep


# brute-force oracle -----------------------------------------------------------------


def oracle_index_set(pa: PolarizedArrangement) -> dict:
    """Feasible and bounded sign vectors without any LP.

    Feasible regions are read off small perturbations of all vertices;
    boundedness is decided on the extreme rays of each region's recession
    cone, which are the lines cut out by k - 1 coordinates.
    """
    n, k = pa.n, pa.k
    eps = Fraction(1, 10 ** 6)
    feas = set()
    for b in itertools.combinations(range(n), k):
        p = pa.solve_basis(b)
        if p is None:
            continue
        mat = RationalMatrix.from_rows([[v[i] for v in pa.V.basis] for i in b], k) if k else None
        for signs in itertools.product((1, -1), repeat=k):
            if k:
                t = solve(mat, [s * eps for s in signs])
                d = [sum((tj * v[i] for tj, v in zip(t, pa.V.basis)), Fraction(0)) for i in range(n)]
            else:
                d = [Fraction(0)] * n
            x = [p[i] + d[i] for i in range(n)]
            if all(xi != 0 for xi in x):
                feas.add(tuple(1 if xi > 0 else -1 for xi in x))
    rays = []
    for S in itertools.combinations(range(n), k - 1) if k >= 1 else []:
        rows = [[v[i] for v in pa.V.basis] for i in S]
        ker = kernel_rows(rows, k) if rows else [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
        if len(ker) != 1:
            continue
        r = [sum((tj * v[i] for tj, v in zip(ker[0], pa.V.basis)), Fraction(0)) for i in range(n)]
        rays += [r, [-x for x in r]]
    bounded = set()
    for a in feas:
        ok = True
        for r in rays:
            if all(a[i] * r[i] >= 0 for i in range(n)) and pa.xi_of(r) > 0:
                ok = False
                break
        if ok:
            bounded.add(a)
    return {"feasible": feas, "index_set": bounded}


def random_generic(n: int, k: int, rng: random.Random, attempts: int = 200, span: int = 5) -> PolarizedArrangement:
    for _ in range(attempts):
        rows = [[Fraction(rng.randint(-span, span)) for _ in range(n)] for _ in range(k)]
        if rank(rows, n) != k:
            continue
        eta = [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(n)]
        xi = [Fraction(rng.randint(-span, span)) for _ in range(n)]
        pa = PolarizedArrangement.make(rows, eta, xi, n)
        try:
            validate(pa)
            validate(gale_dual(pa))
        except GenericityError:
            continue
        return pa
    raise RuntimeError("no generic arrangement found")
