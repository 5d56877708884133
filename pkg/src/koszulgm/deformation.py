"""Graded deformations A~ over Sym U, with U placed in degree 2.

A~ is presented on the arrows plus central loops u_k@v (one per basis
vector of U and vertex v), with relations

    w - sum_k Psi(w)_k u_k@v      for w in W diagonal at v,
    a u_k@t - u_k@s a             for every arrow a: s -> t,
    u_k@v u_l@v - u_l@v u_k@v.

Psi is recorded on the canonical basis of W, one U-vector per relation row.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .algebra import CapExceeded, GradedAlgebra, Letter, build_graded_algebra
from .linalg import RationalMatrix, Subspace, kernel_rows, solve, to_fraction
from .quiver import QuadraticPresentation, quadratic_dual


def sym_dim(n: int, i: int) -> int:
    """dim Sym^i of an n-dimensional space."""
    return comb(n + i - 1, i) if n else int(i == 0)


class DeformationError(ValueError):
    pass


def u_name(k: int, v: str) -> str:
    return f"u{k + 1}@{v}"


def parse_u(name: str):
    """'u3@2' -> (2, '2'); None for arrows."""
    if not name.startswith("u") or "@" not in name:
        return None
    k, v = name[1:].split("@", 1)
    return int(k) - 1, v


def relation_rows(pres: QuadraticPresentation) -> list[tuple[tuple, dict]]:
    """[(component, relation dict)] in canonical order."""
    out = []
    for comp, rows in pres.relations:
        cols = pres.quiver.paths2(*comp)
        for r in rows:
            out.append((comp, {p: c for p, c in zip(cols, r) if c}))
    return out


def dual_center(pres: QuadraticPresentation, cap: int = 12):
    """Canonical basis of Z(A^!)_2, each element as {dual word: coeff} in normal form."""
    dual = quadratic_dual(pres)
    try:
        dalg = build_graded_algebra(dual, cap)
    except CapExceeded:
        dalg = build_graded_algebra(dual, 3, finite=False)
    if dalg.max_degree < 2:
        return dual, dalg, []
    z = dalg.center_degree(2)
    return dual, dalg, [{m[2]: c for m, c in dalg.element(v, 2).items()} for v in z.basis]


def pair_dual(dual_word_combo: Mapping, rel: Mapping) -> Fraction:
    """<f g, m m'> = f(m') g(m); the dual word (f, g) meets the word (g*, f*)."""
    from .quiver import _dual_name
    s = Fraction(0)
    for (f, g), c in dual_word_combo.items():
        s += c * rel.get((_dual_name(g), _dual_name(f)), 0)
    return s


@dataclass(frozen=True)
class DeformationBase:
    """U with basis u_1..u_n and psi: Z(A^!)_2^* -> U (a dim U x dim Z matrix)."""

    dim: int
    psi: RationalMatrix


@dataclass(frozen=True)
class DeformedPresentation:
    presentation: QuadraticPresentation
    base: DeformationBase
    psi_rows: tuple  # one tuple of length base.dim per canonical relation row
    universal: bool = False

    def __post_init__(self):
        rows = relation_rows(self.presentation)
        if len(rows) != len(self.psi_rows):
            raise DeformationError("Psi must give one U-vector per relation row")
        for (comp, _), vec in zip(rows, self.psi_rows):
            if len(vec) != self.base.dim:
                raise DeformationError("Psi values have the wrong length")
            if comp[0] != comp[1] and any(vec):
                raise DeformationError(f"Psi is nonzero on the off-diagonal component {comp}")

    @property
    def dim_u(self) -> int:
        return self.base.dim

    def psi_of(self, rel: Mapping) -> tuple:
        """Psi on an arbitrary element of W, given as {word: coeff}."""
        rows = relation_rows(self.presentation)
        out = [Fraction(0)] * self.dim_u
        by_comp: dict = {}
        for i, (comp, r) in enumerate(rows):
            by_comp.setdefault(comp, []).append(i)
        q = self.presentation.quiver
        comps = set()
        for a, b in rel:
            comps.add((q.arrow(a).source, q.arrow(b).target))
        for comp in comps:
            cols = q.paths2(*comp)
            idx = by_comp.get(comp, [])
            mat = RationalMatrix.from_rows([[rows[i][1].get(p, 0) for i in idx] for p in cols], len(idx))
            coords = solve(mat, [rel.get(p, 0) if (q.arrow(p[0]).source, q.arrow(p[1]).target) == comp else 0
                                 for p in cols]) if idx else None
            if coords is None:
                if any(rel.get(p, 0) for p in cols):
                    raise DeformationError("element is not in W")
                continue
            for c, i in zip(coords, idx):
                for k in range(self.dim_u):
                    out[k] += c * self.psi_rows[i][k]
        return tuple(out)

    def deformed_relations(self) -> list[dict]:
        q = self.presentation.quiver
        rels = []
        for (comp, r), vec in zip(relation_rows(self.presentation), self.psi_rows):
            d = {w: c for w, c in r.items()}
            for k, c in enumerate(vec):
                if c:
                    d[(u_name(k, comp[0]),)] = -c
            rels.append(d)
        for a in q.arrows:
            for k in range(self.dim_u):
                rels.append({(a.name, u_name(k, a.target)): 1, (u_name(k, a.source), a.name): -1})
        for v in q.vertices:
            for k in range(self.dim_u):
                for l in range(k + 1, self.dim_u):
                    rels.append({(u_name(k, v), u_name(l, v)): 1, (u_name(l, v), u_name(k, v)): -1})
        return rels


def universal_deformation(pres: QuadraticPresentation, cap: int = 12) -> DeformedPresentation:
    """U = Z(A^!)_2^* with psi the identity; Psi(w)_k = <z_k, w>."""
    _, _, zs = dual_center(pres, cap)
    n = len(zs)
    rows = tuple(tuple(pair_dual(z, r) for z in zs) for _, r in relation_rows(pres))
    return DeformedPresentation(pres, DeformationBase(n, RationalMatrix.identity(n)), rows, universal=True)


def from_psi(pres: QuadraticPresentation, psi: RationalMatrix | Sequence[Sequence], cap: int = 12) -> DeformedPresentation:
    """Base change of the universal deformation along psi: Z(A^!)_2^* -> U'."""
    uni = universal_deformation(pres, cap)
    if not isinstance(psi, RationalMatrix):
        if any(len(r) != uni.dim_u for r in psi):
            raise DeformationError(f"psi must have source dimension {uni.dim_u}")
        psi = RationalMatrix.from_rows(psi, uni.dim_u) if len(psi) else RationalMatrix(0, uni.dim_u, ())
    if psi.cols != uni.dim_u:
        raise DeformationError(f"psi must have source dimension {uni.dim_u}, got {psi.cols}")
    rows = tuple(tuple(psi.apply(r)) if psi.rows else () for r in uni.psi_rows)
    return DeformedPresentation(pres, DeformationBase(psi.rows, psi), rows, universal=psi == RationalMatrix.identity(uni.dim_u))


def arbitrary_psi(pres: QuadraticPresentation, values: Sequence[Sequence]) -> DeformedPresentation:
    """A deformation with Psi given directly on the relation rows (flatness not implied)."""
    dim = len(values[0]) if values else 0
    rows = tuple(tuple(to_fraction(x) for x in v) for v in values)
    return DeformedPresentation(pres, DeformationBase(dim, RationalMatrix(dim, 0, tuple(() for _ in range(dim)))), rows)


def random_psi(pres: QuadraticPresentation, dim_u: int, rng: random.Random, lo: int = -3, hi: int = 3) -> DeformedPresentation:
    vals = []
    for comp, _ in relation_rows(pres):
        if comp[0] == comp[1]:
            vals.append([Fraction(rng.randint(lo, hi)) for _ in range(dim_u)])
        else:
            vals.append([Fraction(0)] * dim_u)
    if not vals:
        return arbitrary_psi(pres, [])
    return arbitrary_psi(pres, vals)


# flatness ---------------------------------------------------------------------


def _paths3(q, s, t):
    return [(a.name, b.name, c.name) for a in q.arrows if a.source == s
            for b in q.arrows if b.source == a.target for c in q.arrows if c.source == b.target and c.target == t]


def bg_flatness_check(dp: DeformedPresentation, cap: int = 12) -> dict:
    """(b (x) id - id (x) b) on (W (x) M) cap (M (x) W), for b = chi o Psi, chi over a basis of U^*.

    Also computes the factoring criterion (Psi kills the annihilator of
    Z(A^!)_2 in W) and reports whether the two agree.
    """
    pres = dp.presentation
    q = pres.quiver
    rows = relation_rows(pres)
    witnesses = []
    for s in q.vertices:
        for t in q.vertices:
            cols = _paths3(q, s, t)
            if not cols:
                continue
            pos = {p: i for i, p in enumerate(cols)}
            left, right = [], []  # (vector, relation index, arrow) for w.c and a.w
            for i, (comp, r) in enumerate(rows):
                if comp[0] == s:
                    for c in q.arrows:
                        if c.source == comp[1] and c.target == t:
                            v = [Fraction(0)] * len(cols)
                            for (a, b), x in r.items():
                                v[pos[(a, b, c.name)]] += x
                            left.append((v, i, c.name))
                if comp[1] == t:
                    for a in q.arrows:
                        if a.source == s and a.target == comp[0]:
                            v = [Fraction(0)] * len(cols)
                            for (b, c), x in r.items():
                                v[pos[(a.name, b, c)]] += x
                            right.append((v, i, a.name))
            if not left or not right:
                continue
            n = len(cols)
            # coefficients (x, y) with sum x_i left_i = sum y_j right_j
            mat = [[left[i][0][r] for i in range(len(left))] + [-right[j][0][r] for j in range(len(right))] for r in range(n)]
            for vec in kernel_rows(mat, len(left) + len(right)):
                xs, ys = vec[:len(left)], vec[len(left):]
                for k in range(dp.dim_u):
                    diff: dict = {}
                    for x, (_, i, c) in zip(xs, left):
                        if x and rows[i][0][0] == rows[i][0][1]:
                            diff[c] = diff.get(c, 0) + x * dp.psi_rows[i][k]
                    for y, (_, i, a) in zip(ys, right):
                        if y and rows[i][0][0] == rows[i][0][1]:
                            diff[a] = diff.get(a, 0) - y * dp.psi_rows[i][k]
                    if any(diff.values()):
                        witnesses.append({"component": [s, t], "chi": k, "defect": {a: c for a, c in diff.items() if c}})
    bg = not witnesses
    factoring = factors_through_dual_center(dp, cap)
    return {"bg_passed": bg, "factors_through_center": factoring, "agree": bg == factoring, "witnesses": witnesses[:5]}


def factors_through_dual_center(dp: DeformedPresentation, cap: int = 12) -> bool:
    pres = dp.presentation
    _, _, zs = dual_center(pres, cap)
    rows = relation_rows(pres)
    if not rows:
        return True
    mat = [[pair_dual(z, r) for _, r in rows] for z in zs]
    kern = kernel_rows(mat, len(rows)) if mat else [[Fraction(int(i == j)) for j in range(len(rows))] for i in range(len(rows))]
    for v in kern:
        for k in range(dp.dim_u):
            if sum(c * dp.psi_rows[i][k] for i, c in enumerate(v)):
                return False
    return True


# the deformed algebra ----------------------------------------------------------


class DeformedAlgebra:
    """A~ built to a degree cap, plus the flatness audit against A."""

    def __init__(self, dp: DeformedPresentation, cap: int, base: GradedAlgebra | None = None):
        self.dp = dp
        q = dp.presentation.quiver
        letters = [Letter(a.name, a.source, a.target, 1) for a in q.arrows]
        letters += [Letter(u_name(k, v), v, v, 2) for v in q.vertices for k in range(dp.dim_u)]
        self.alg = GradedAlgebra(q.vertices, letters, dp.deformed_relations(), cap=cap, finite=False)
        self.cap = cap
        self.base = base or build_graded_algebra(dp.presentation)
        self.audit = self._audit()

    def expected_dim(self, d: int) -> int:
        n = self.dp.dim_u
        dims = self.base.dims
        return sum(dims[d - 2 * i] * sym_dim(n, i) for i in range(d // 2 + 1) if d - 2 * i < len(dims))

    def _audit(self) -> list[dict]:
        return [{"degree": d, "dim": self.alg.dims[d], "expected": self.expected_dim(d),
                 "passed": self.alg.dims[d] == self.expected_dim(d)} for d in range(self.cap + 1)]

    @property
    def flat(self) -> bool:
        return all(r["passed"] for r in self.audit)

    def u_letters(self, v: str) -> list[str]:
        return [u_name(k, v) for k in range(self.dp.dim_u)]

    def central_u(self, k: int) -> dict:
        """u_k as the central element sum_v u_k@v."""
        out = {}
        for v in self.alg.vertices:
            out.update(self.alg.word(u_name(k, v)))
        return out

    def reduce_mod_u(self, x: Mapping) -> dict:
        """Image in A: drop u-monomials, re-reduce the rest."""
        out: dict = {}
        for m, c in x.items():
            if any(parse_u(n) for n in m[2]):
                continue
            part = self.base.word(*m[2]) if m[2] else self.base.idempotent(m[0])
            for k, v in part.items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def reduction_failures(self, max_degree: int | None = None, limit: int = 5) -> list:
        """Pairs of normal monomials whose product does not reduce to the product in A."""
        top = min(self.cap, self.base.max_degree + 2) if max_degree is None else max_degree
        monos = [m for d in range(top + 1) for m in self.alg.basis[d]]
        bad = []
        for a in monos:
            for b in monos:
                if a[1] != b[0] or self.alg.degree(a) + self.alg.degree(b) > self.cap:
                    continue
                lhs = self.reduce_mod_u(self.alg.mul({a: Fraction(1)}, {b: Fraction(1)}))
                rhs = self.base.mul(self.reduce_mod_u({a: Fraction(1)}), self.reduce_mod_u({b: Fraction(1)}))
                if lhs != rhs:
                    bad.append((a, b))
                    if len(bad) >= limit:
                        return bad
        return bad


def build_deformed_algebra(dp: DeformedPresentation, cap: int | None = None, base: GradedAlgebra | None = None) -> DeformedAlgebra:
    base = base or build_graded_algebra(dp.presentation)
    cap = base.top_degree + 2 if cap is None else cap
    if cap < 2:
        raise ValueError("cap must be at least 2")
    return DeformedAlgebra(dp, cap, base)


def specialize(dp: DeformedPresentation, chi: Sequence, cap: int | None = None, base: GradedAlgebra | None = None) -> dict:
    """A_chi = T(M)/<w - chi(Psi(w))> with its length filtration.

    The homogenization H (one central t of degree 2) maps onto A_chi with
    kernel (t - 1)H; the image of H_d is H_d modulo t-torsion, so
    dim gr_d A_chi = dim H_d/Tor_d - dim H_{d-2}/Tor_{d-2}.
    """
    base = base or build_graded_algebra(dp.presentation)
    chi = [to_fraction(c) for c in chi]
    if len(chi) != dp.dim_u:
        raise DeformationError("chi has the wrong length")
    rows = tuple((sum((c * x for c, x in zip(chi, r)), Fraction(0)),) for r in dp.psi_rows)
    h = arbitrary_psi(dp.presentation, rows) if rows else arbitrary_psi(dp.presentation, [])
    cap = 2 * base.top_degree + 8 if cap is None else cap
    H = GradedAlgebra(base.vertices,
                      [Letter(a.name, a.source, a.target, 1) for a in dp.presentation.quiver.arrows]
                      + [Letter(u_name(0, v), v, v, 2) for v in base.vertices],
                      h.deformed_relations() if rows else [], cap=cap, finite=False)
    t = {}
    for v in base.vertices:
        t.update(H.word(u_name(0, v)))

    def tmul(vec, d):
        return H.vector(H.mul(H.element(vec, d), t), d + 2)

    free_rank = {}
    for d in range(cap + 1):
        n = H.dims[d]
        if n == 0:
            free_rank[d] = 0
            continue
        prev_dim, stable = None, False
        vecs = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        e = d
        while e + 2 <= cap:
            vecs = [tmul(v, e) for v in vecs]
            e += 2
            kd = n - Subspace.span(vecs, H.dims[e]).dim if H.dims[e] else n
            if kd == prev_dim:
                stable = True
                break
            prev_dim = kd
        if not stable:
            break
        free_rank[d] = n - prev_dim
    gr = {}
    for d in sorted(free_rank):
        gr[d] = free_rank[d] - free_rank.get(d - 2, 0)
    # the filtration must have stopped growing in both parities
    done = [d for d in gr if d >= 1 and gr[d] == 0 and gr.get(d - 1, 1) == 0]
    if not done:
        raise CapExceeded(f"A_chi not finite-dimensional within cap {cap}", [gr[d] for d in sorted(gr)])
    last = done[0]
    gr_dims = [gr[d] for d in range(last + 1)]
    while gr_dims and gr_dims[-1] == 0:
        gr_dims.pop()
    dims_a = list(base.dims)
    return {"chi": chi, "dim": sum(gr_dims), "gr_dims": gr_dims, "dims_A": dims_a,
            "gr_isomorphic_to_A": gr_dims == dims_a}
