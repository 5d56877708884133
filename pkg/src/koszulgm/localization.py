"""Deformed standard modules, central characters and the localization algebra Z(A~).

Sym U elements are dicts {exponent tuple: coeff}.  A central element of
degree d acts on the deformed standard module at alpha by the scalar
h_alpha(zeta) in Sym^(d/2) U; this is read off the degree-0 generator and
then verified on every basis vector within the cap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import GradedAlgebra, add_into, build_graded_algebra, format_element
from .arrangements import DualityCertificate, LocalizationAlgebra, check_duality
from .deformation import (DeformedAlgebra, build_deformed_algebra, sym_dim, u_name,
                          universal_deformation)
from .highest_weight import OrderedPresentation, standard_module, updown_matrix
from .linalg import RationalMatrix, Subspace, kernel_rows, rank, solve
from .modules import GradedRightModule, quotient_by_vertices
from .quiver import quadratic_dual


class LocalizationError(ValueError):
    pass


class NotFlexible(LocalizationError):
    pass


# Sym U ------------------------------------------------------------------------------


def sym_basis(n: int, i: int) -> list[tuple]:
    """Exponent vectors of total degree i in n variables, descending lexicographic."""
    if n == 0:
        return [()] if i == 0 else []
    return sorted((e for e in itertools.product(range(i + 1), repeat=n) if sum(e) == i), reverse=True)


def poly_mul(p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for e, a in p.items():
        for f, b in q.items():
            k = tuple(x + y for x, y in zip(e, f))
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


def poly_eval(p: Mapping, point: Sequence) -> Fraction:
    s = Fraction(0)
    for e, c in p.items():
        t = c
        for x, k in zip(point, e):
            t *= Fraction(x) ** k
        s += t
    return s


def format_poly(p: Mapping, names: Sequence[str]) -> str:
    if not p:
        return "0"
    parts = []
    for e, c in sorted(p.items(), reverse=True):
        mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
        mag = abs(c)
        body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else f"{mag}")
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def u_word(exps: Sequence[int], v: str) -> tuple:
    return tuple(n for k, e in enumerate(exps) for n in [u_name(k, v)] * e)


def sym_element(D: DeformedAlgebra, p: Mapping) -> dict:
    """A Sym U element as a central element of A~."""
    out: dict = {}
    for e, c in p.items():
        for v in D.alg.vertices:
            w = u_word(e, v)
            add_into(out, D.alg.word(*w) if w else D.alg.idempotent(v), c)
    return out


# modules -------------------------------------------------------------------------------


def free_mul(M: GradedRightModule, x: Mapping, elt: Mapping) -> dict:
    out: dict = {}
    for m, c in elt.items():
        add_into(out, M.free.act_mono(x, m), c)
    return out


def deformed_standard(D: DeformedAlgebra, op: OrderedPresentation, alpha: str, base_std: GradedRightModule | None = None) -> GradedRightModule:
    """e_alpha A~ / e_alpha A~ eps_alpha A~ within the cap, checked free over Sym U."""
    alpha = str(alpha)
    V = quotient_by_vertices(D.alg, alpha, op.eps(alpha), max_degree=D.cap)
    V0 = base_std or standard_module(op, alpha, D.base)
    n = D.dp.dim_u
    for d in range(D.cap + 1):
        want = sum(V0.dim_at(d - 2 * i) * sym_dim(n, i) for i in range(d // 2 + 1))
        if V.dim_at(d) != want:
            raise LocalizationError(f"deformed standard at {alpha} is not flat in degree {d}: {V.dim_at(d)} != {want}")
    return V


def character_value(D: DeformedAlgebra, V: GradedRightModule, alpha: str, zeta: Mapping, d: int, verify: bool = True) -> dict:
    """h_alpha(zeta) for a central zeta of degree d."""
    if d % 2:
        val: dict = {}
    else:
        i = d // 2
        gen = {(0, (alpha, alpha, ())): Fraction(1)}
        target = V.project(free_mul(V, gen, zeta), d)
        monos = sym_basis(D.dp.dim_u, i)
        cols = []
        for e in monos:
            w = u_word(e, alpha)
            img = free_mul(V, gen, D.alg.word(*w)) if w else gen
            cols.append(V.project(img, d))
        if not monos:
            val = {}
        else:
            mat = RationalMatrix.from_rows([[c[r] for c in cols] for r in range(len(target))], len(monos)) \
                if target else None
            sol = solve(mat, target) if mat is not None else tuple(Fraction(0) for _ in monos)
            if sol is None:
                raise LocalizationError(f"zeta does not act on the generator of V~_{alpha} through Sym U")
            val = {e: c for e, c in zip(monos, sol) if c}
    if verify:
        # odd-degree central elements must act by zero
        central = sym_element(D, val) if val else {}
        for e in V.degrees():
            if e + d > D.cap:
                continue
            for k in range(V.dim_at(e)):
                unit = [Fraction(int(k == j)) for j in range(V.dim_at(e))]
                x = V.lift(unit, e)
                lhs = V.project(free_mul(V, x, zeta), e + d)
                rhs = V.project(free_mul(V, x, central), e + d) if central else [Fraction(0)] * V.dim_at(e + d)
                if lhs != rhs:
                    raise LocalizationError(f"central element acts non-scalarly on V~_{alpha} (degree {e})")
    return val


def deformed_center(D: DeformedAlgebra, d: int) -> Subspace:
    """Z(A~)_d in A~_d coordinates; u-letters are central by construction."""
    arrows = [l.name for l in D.alg.letters if l.weight == 1]
    return D.alg.center_degree(d, arrows)


# the assembled object -------------------------------------------------------------------


@dataclass
class QuiverLocalization:
    """Everything computed on the way to Z(A~) for an ordered presentation."""

    op: OrderedPresentation
    alg: GradedAlgebra
    D: DeformedAlgebra
    center_cap: int
    center: dict  # degree -> list of elements of A~
    h: dict  # alpha -> degree -> list of Sym U polys (aligned with center[d])
    zA2: list  # basis elements of Z(A)_2
    pi: RationalMatrix  # Z(A~)_2 -> Z(A)_2 coordinates
    la: LocalizationAlgebra
    standards: dict = field(default_factory=dict)

    @property
    def index(self):
        return self.op.vertices

    @property
    def u_names(self):
        return tuple(f"u{k + 1}" for k in range(self.D.dp.dim_u))

    def h_matrix(self, alpha: str) -> RationalMatrix:
        return self.la.h[alpha]

    def center_vector(self, zeta: Mapping) -> list:
        """Coordinates of a degree-2 central element in the stored Z(A~)_2 basis."""
        mat = RationalMatrix.from_rows([[self.D.alg.vector(z, 2)[r] for z in self.center[2]]
                                        for r in range(len(self.D.alg.basis[2]))], len(self.center[2]))
        sol = solve(mat, self.D.alg.vector(zeta, 2))
        if sol is None:
            raise LocalizationError("element is not central of degree 2")
        return list(sol)

    def character(self, alpha: str, zeta: Mapping, d: int = 2) -> dict:
        return character_value(self.D, self.standards[alpha], alpha, zeta, d)


def _elements_from_subspace(alg: GradedAlgebra, S: Subspace, d: int) -> list[dict]:
    return [alg.element(v, d) for v in S.basis]


def localization_algebra(op: OrderedPresentation, center_cap: int | None = None, alg: GradedAlgebra | None = None) -> QuiverLocalization:
    """(U, Z(A~), I, h) for the universal deformation, up to the center cap (default top + 2)."""
    pres = op.presentation
    alg = alg or build_graded_algebra(pres)
    center_cap = alg.top_degree + 2 if center_cap is None else center_cap
    dp = universal_deformation(pres)
    D = build_deformed_algebra(dp, max(center_cap + 1, 3), alg)
    n = dp.dim_u
    standards = {a: deformed_standard(D, op, a, standard_module(op, a, alg)) for a in op.vertices}
    center, h = {}, {a: {} for a in op.vertices}
    for d in range(center_cap + 1):
        els = _elements_from_subspace(D.alg, deformed_center(D, d), d)
        center[d] = els
        for a in op.vertices:
            h[a][d] = [character_value(D, standards[a], a, z, d) for z in els]
    # degree two data
    z2 = center[2]
    basis2 = D.alg.basis[2]
    zmat = RationalMatrix.from_rows([[D.alg.vector(z, 2)[r] for z in z2] for r in range(len(basis2))], len(z2)) \
        if z2 else None
    incl_rows = []
    for k in range(n):
        sol = solve(zmat, D.alg.vector(D.central_u(k), 2)) if zmat is not None else None
        if sol is None:
            raise LocalizationError("U does not land in Z(A~)_2")
        incl_rows.append(sol)
    incl = RationalMatrix.from_rows(incl_rows, len(z2)) if n else RationalMatrix(0, len(z2), ())
    hm = {}
    unit = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    for a in op.vertices:
        hm[a] = RationalMatrix.from_rows([[h[a][2][i].get(unit[k], Fraction(0)) for i in range(len(z2))]
                                          for k in range(n)], len(z2)) if n else RationalMatrix(0, len(z2), ())
    # Z(A)_2 and the reduction map
    zA = alg.center_degree(2) if alg.max_degree >= 2 else Subspace.zero(0)
    zA2 = _elements_from_subspace(alg, zA, 2) if alg.max_degree >= 2 else []
    pi_rows = []
    if zA2:
        amat = RationalMatrix.from_rows([[alg.vector(z, 2)[r] for z in zA2] for r in range(len(alg.basis[2]))], len(zA2))
        cols = []
        for z in z2:
            red = D.reduce_mod_u(z)
            sol = solve(amat, alg.vector(red, 2))
            if sol is None:
                raise LocalizationError("reduction of a central element is not central")
            cols.append(sol)
        pi_rows = [[c[r] for c in cols] for r in range(len(zA2))]
    pi = RationalMatrix.from_rows(pi_rows, len(z2)) if zA2 else RationalMatrix(0, len(z2), ())
    la = LocalizationAlgebra(tuple(op.vertices), tuple(f"u{k + 1}" for k in range(n)),
                             tuple(format_element(z) for z in z2), incl, hm,
                             zA_names=tuple(format_element(z) for z in zA2),
                             meta={"center_cap": center_cap})
    ql = QuiverLocalization(op, alg, D, center_cap, center, h, zA2, pi, la, standards)
    if is_flexible(ql):
        la.j = {(a, b): character_j(ql, a, b) for a in op.vertices for b in op.vertices}
    return ql


# flexibility and j-maps ---------------------------------------------------------------


def is_flexible(ql: QuiverLocalization) -> bool:
    return ql.pi.rank() == len(ql.zA2) if ql.zA2 else True


def character_j(ql: QuiverLocalization, alpha: str, beta: str) -> RationalMatrix:
    """j_{alpha beta}: Z(A)_2 -> U, z -> h_beta(zeta) - h_alpha(zeta) for a lift zeta."""
    if not is_flexible(ql):
        raise NotFlexible("Z(A~)_2 -> Z(A)_2 is not surjective")
    n, m = ql.D.dp.dim_u, len(ql.zA2)
    diff = RationalMatrix.from_rows(
        [[ql.la.h[beta][k, i] - ql.la.h[alpha][k, i] for i in range(ql.la.dim_z)] for k in range(n)], ql.la.dim_z) \
        if n else RationalMatrix(0, ql.la.dim_z, ())
    cols = []
    for j in range(m):
        lift = solve(ql.pi, [int(i == j) for i in range(m)])
        cols.append(diff.apply(lift) if n else ())
    # lift-independence on ker pi
    for kv in kernel_rows(ql.pi.tolists(), ql.la.dim_z) if m else []:
        if n and any(diff.apply(kv)):
            raise LocalizationError(f"j_({alpha},{beta}) depends on the chosen lift")
    return RationalMatrix.from_rows([[cols[j][k] for j in range(m)] for k in range(n)], m) if n else RationalMatrix(0, m, ())


def up_down_lift(ql: QuiverLocalization, z: Mapping) -> tuple[dict, dict]:
    """mu(z) as {(a, b): coeff} over up-down words, and nu(z) in A~_2."""
    alg, op = ql.alg, ql.op
    mu: dict = {}
    for alpha in op.vertices:
        words, idx, cols = updown_matrix(op, alg, alpha)
        zv = alg.vector({m: c for m, c in z.items() if m[0] == alpha and m[1] == alpha}, 2)
        target = [zv[i] for i in idx]
        if not any(target):
            continue
        if not words:
            raise LocalizationError(f"no up-down expression at {alpha}")
        mat = RationalMatrix.from_rows([[c[r] for c in cols] for r in range(len(idx))], len(words))
        sol = solve(mat, target)
        if sol is None:
            raise LocalizationError(f"no up-down expression at {alpha}")
        for w, c in zip(words, sol):
            if c:
                mu[w] = mu.get(w, 0) + c
    nu: dict = {}
    for w, c in mu.items():
        add_into(nu, ql.D.alg.word(*w), c)
    if ql.D.reduce_mod_u(nu) != {k: v for k, v in z.items() if v}:
        raise LocalizationError("nu(z) does not reduce to z")
    return mu, nu


def commutator_check(ql: QuiverLocalization) -> dict:
    """[nu(z), a] = j_{alpha beta}(z) a for arrows a: alpha -> beta, and the central lift packaging."""
    Dalg = ql.D.alg
    fails, packaged = [], True
    q = ql.op.presentation.quiver
    for j, z in enumerate(ql.zA2):
        _, nu = up_down_lift(ql, z)
        for a in q.arrows:
            av = Dalg.word(a.name)
            comm = add_into(Dalg.mul(nu, av), Dalg.mul(av, nu), -1)
            jv = ql.la.j[(a.source, a.target)]
            rhs: dict = {}
            for k in range(ql.D.dp.dim_u):
                if jv[k, j]:
                    add_into(rhs, Dalg.mul(Dalg.word(u_name(k, a.source)), av), jv[k, j])
            if comm != rhs:
                fails.append((format_element(z), a.name))
        # zeta = nu(z) + sum_gamma j_{delta gamma}(z) e_gamma is central
        delta = ql.op.vertices[0]
        zeta = dict(nu)
        for g in ql.op.vertices:
            jv = ql.la.j[(delta, g)]
            for k in range(ql.D.dp.dim_u):
                if jv[k, j]:
                    add_into(zeta, Dalg.word(u_name(k, g)), jv[k, j])
        Z2 = Subspace.span([Dalg.vector(c, 2) for c in ql.center[2]], len(Dalg.basis[2]))
        if not Z2.contains(Dalg.vector(zeta, 2)):
            packaged = False
    return {"passed": not fails and packaged, "commutator_failures": fails, "central_lifts": packaged}


def cocycle_check(ql: QuiverLocalization) -> bool:
    J = ql.la.j
    vs = ql.op.vertices
    for a, b, c in itertools.product(vs, repeat=3):
        s = [[J[(a, b)][k, i] + J[(b, c)][k, i] for i in range(J[(a, c)].cols)] for k in range(J[(a, c)].rows)]
        if RationalMatrix.from_rows(s, J[(a, c)].cols) != J[(a, c)] if J[(a, c)].rows else False:
            return False
    return all(not any(x for r in J[(a, a)].entries for x in r) for a in vs)


# diagnostics -------------------------------------------------------------------------


PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _generic_points(n: int, seed_point: Sequence | None = None):
    base = list(seed_point) if seed_point else list(PRIMES[:n])
    if len(base) != n:
        raise ValueError(f"seed point needs {n} coordinates")
    yield [Fraction(x) for x in base]
    for t in range(1, 6):
        yield [Fraction(x) + Fraction(t, PRIMES[(i + t) % len(PRIMES)]) for i, x in enumerate(base)]


def diagnostics(ql: QuiverLocalization, opposite_flag: bool = False, seed_point: Sequence | None = None) -> dict:
    vs = ql.op.vertices
    n = ql.D.dp.dim_u
    out = {"center_cap": ql.center_cap, "flexible": is_flexible(ql)}
    # malleable: characters pairwise distinct somewhere within the cap
    pairs = {}
    for a, b in itertools.combinations(vs, 2):
        where = next((d for d in range(ql.center_cap + 1) if ql.h[a][d] != ql.h[b][d]), None)
        pairs[(a, b)] = where
    distinct = all(w is not None for w in pairs.values())
    if not opposite_flag:
        out["malleable"] = "not applicable"
    else:
        out["malleable"] = True if distinct else "indistinguishable to cap"
    out["characters_distinct"] = distinct
    # strong: degree-wise injectivity plus generic spanning
    inj = True
    for d in range(ql.center_cap + 1):
        els = ql.center[d]
        if not els:
            continue
        monos = sym_basis(n, d // 2) if d % 2 == 0 else []
        rows = [[ql.h[a][d][i].get(e, Fraction(0)) for i in range(len(els))] for a in vs for e in monos]
        if not rows or rank(rows, len(els)) != len(els):
            inj = False
    span_ok, used = False, None
    for pt in _generic_points(n, seed_point):
        vecs = [[poly_eval(ql.h[a][d][i], pt) for a in vs] for d in range(ql.center_cap + 1) for i in range(len(ql.center[d]))]
        if vecs and rank(vecs, len(vs)) == len(vs):
            span_ok, used = True, pt
            break
    out["strong"] = inj and span_ok
    out["generic_point"] = [str(x) for x in used] if used else None
    # free: Hilbert series times (1 - t^2)^n
    hilb = [len(ql.center[d]) for d in range(ql.center_cap + 1)]
    p = list(hilb)
    for _ in range(n):
        p = [p[d] - (p[d - 2] if d >= 2 else 0) for d in range(len(p))]
    out["hilbert"] = hilb
    out["numerator"] = p
    out["free"] = all(c >= 0 for c in p) and sum(p) == len(vs) and span_ok
    out["certified_to_cap"] = ql.center_cap
    return out


# canonical pairing ------------------------------------------------------------------


def dual_order(op: OrderedPresentation) -> OrderedPresentation:
    """A^! with the reversed order."""
    return OrderedPresentation(quadratic_dual(op.presentation), frozenset((b, a) for a, b in op.less))


def canonical_pairing(ql: QuiverLocalization, qd: QuiverLocalization) -> dict:
    """<zeta, zeta!>_alpha = <h_alpha(zeta), pi(zeta!)> + <pi(zeta), h!_alpha(zeta!)> for every alpha."""
    if not (is_flexible(ql) and is_flexible(qd)):
        raise NotFlexible("both sides must be flexible")
    mats = {}
    for a in ql.index:
        h, hd = ql.la.h[a], qd.la.h[a]
        first = h.transpose() @ qd.pi if h.rows else None
        second = ql.pi.transpose() @ hd if hd.rows else None
        if first is None and second is None:
            mats[a] = RationalMatrix.zeros(ql.la.dim_z, qd.la.dim_z)
        elif first is None:
            mats[a] = second
        elif second is None:
            mats[a] = first
        else:
            mats[a] = RationalMatrix.from_rows([[x + y for x, y in zip(r1, r2)]
                                                for r1, r2 in zip(first.entries, second.entries)], first.cols)
    vals = list(mats.values())
    agree = all(m == vals[0] for m in vals)
    cert = DualityCertificate(vals[0], {a: a for a in ql.index})
    return {"agree": agree, "per_index": mats, "certificate": cert, "perfect": cert.perfect}


def koszul_duality(op: OrderedPresentation, center_cap: int | None = None) -> dict:
    """Build Z(A~) and Z(A~^!) and verify that they are dual via the canonical pairing."""
    ql = localization_algebra(op, center_cap)
    qd = localization_algebra(dual_order(op), center_cap)
    pair = canonical_pairing(ql, qd)
    check = check_duality(ql.la, qd.la, pair["certificate"])
    return {"A": ql, "dual": qd, "pairing": pair, "duality": check}
