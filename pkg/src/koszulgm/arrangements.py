"""Localization algebras in degree two, fibered arrangements, and their duality.

Coordinates: Z_2 has a chosen basis z_1..z_n; U has basis u_1..u_m.
``incl`` is the m x n matrix whose rows are the u_k in z-coordinates, and
``h[alpha]`` is the m x n matrix whose column i is h_alpha(z_i) in U.
E = Z_2^* carries the dual coordinates, so the projection E -> F = U^* is
``incl`` acting on columns and H_alpha is the row space of ``h[alpha]``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import RationalMatrix, Subspace, annihilator, kernel, kernel_rows


class DegenerateArrangement(ValueError):
    pass


@dataclass
class LocalizationAlgebra:
    """Degree-two data (U, Z_2, I, h) plus optional higher-degree and j-map data."""

    index: tuple
    u_names: tuple
    z_names: tuple
    incl: RationalMatrix
    h: dict  # alpha -> RationalMatrix (dim U x dim Z_2)
    j: dict | None = None  # (alpha, beta) -> RationalMatrix (dim U x dim Z(A)_2)
    zA_names: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def dim_u(self) -> int:
        return len(self.u_names)

    @property
    def dim_z(self) -> int:
        return len(self.z_names)

    def check(self) -> list[str]:
        """h_alpha restricted to U must be the identity."""
        bad = []
        for a in self.index:
            if (self.h[a] @ self.incl.transpose()) != RationalMatrix.identity(self.dim_u):
                bad.append(f"h_{a} is not the identity on U")
        return bad


@dataclass(frozen=True)
class FiberedArrangement:
    """Surjection E -> F (rows of ``projection``) with subspaces H_alpha of E."""

    dim_e: int
    projection: RationalMatrix  # dim F x dim E
    subspaces: tuple  # ((alpha, Subspace), ...)

    def __post_init__(self):
        f = self.projection.rank()
        if f != self.projection.rows:
            raise DegenerateArrangement("projection is not surjective")
        for a, H in self.subspaces:
            if H.dim != f or RationalMatrix(H.dim, self.dim_e, H.basis).__matmul__(self.projection.transpose()).rank() != f:
                raise DegenerateArrangement(f"H_{a} does not project isomorphically onto F")

    @property
    def index(self) -> tuple:
        return tuple(a for a, _ in self.subspaces)

    def H(self, alpha) -> Subspace:
        return dict(self.subspaces)[alpha]

    def kernel(self) -> Subspace:
        return kernel(self.projection)


def fibered(la: LocalizationAlgebra) -> FiberedArrangement:
    subs = tuple((a, la.h[a].row_space()) for a in la.index)
    return FiberedArrangement(la.dim_z, la.incl, subs)


def dual_arrangement(fa: FiberedArrangement) -> FiberedArrangement:
    """E^* -> E^*/F^* with subspaces H_alpha^perp."""
    ker = fa.kernel()
    proj = RationalMatrix(ker.dim, fa.dim_e, ker.basis) if ker.dim else RationalMatrix(0, fa.dim_e, ())
    return FiberedArrangement(fa.dim_e, proj, tuple((a, annihilator(H)) for a, H in fa.subspaces))


def equivalent(a: FiberedArrangement, b: FiberedArrangement) -> bool:
    """Equal up to the canonical identification: same kernel and same H_alpha."""
    return (a.dim_e == b.dim_e and a.kernel() == b.kernel() and a.index == b.index
            and all(a.H(x) == b.H(x) for x in a.index))


def _image(T: RationalMatrix, S: Subspace) -> Subspace:
    return Subspace.span([T.apply(v) for v in S.basis], T.rows)


def _maps_into(T, S, S2) -> bool:
    return S2.contains_space(_image(T, S))


def find_linear_isomorphism(a: FiberedArrangement, b: FiberedArrangement, seed: int = 0, tries: int = 6):
    """Invertible T: E_a -> E_b and a bijection sigma with T(ker) = ker and T(H_x) = H_sigma(x).

    Returns (T, sigma) or None.  Conditions are linear in T for a fixed
    sigma; a seeded random point of the solution space is tested for
    invertibility.
    """
    n = a.dim_e
    if n != b.dim_e or len(a.index) != len(b.index):
        return None
    ka, kb = a.kernel(), b.kernel()
    if ka.dim != kb.dim:
        return None
    rng = random.Random(seed)
    for perm in itertools.permutations(b.index):
        sigma = dict(zip(a.index, perm))
        pairs = [(ka, kb)] + [(a.H(x), b.H(sigma[x])) for x in a.index]
        if any(s.dim != t.dim for s, t in pairs):
            continue
        rows = []
        for S, S2 in pairs:
            ann = annihilator(S2)
            for v in S.basis:
                for f in ann.basis:
                    # f . (T v) = sum_ij f_i T_ij v_j
                    rows.append([f[i] * v[j] for i in range(n) for j in range(n)])
        sol = kernel_rows(rows, n * n) if rows else [[Fraction(int(i == j)) for j in range(n * n)] for i in range(n * n)]
        if not sol:
            continue
        for _ in range(tries):
            coeffs = [Fraction(rng.randint(-9, 9)) for _ in sol]
            flat = [sum((c * s[k] for c, s in zip(coeffs, sol)), Fraction(0)) for k in range(n * n)]
            T = RationalMatrix.from_rows([flat[i * n:(i + 1) * n] for i in range(n)], n)
            if T.rank() == n:
                return T, sigma
    return None


# duality -------------------------------------------------------------------------


@dataclass
class DualityCertificate:
    """Pairing G[i][j] = <z_i, z'_j> between Z_2 and Z_2^vee, plus an index bijection."""

    pairing: RationalMatrix
    bijection: dict

    @property
    def perfect(self) -> bool:
        return self.pairing.rows == self.pairing.cols and self.pairing.rank() == self.pairing.rows


def check_duality(za: LocalizationAlgebra, zb: LocalizationAlgebra, cert: DualityCertificate) -> dict:
    """Definition-level duality test.

    (i) the kernels of E -> F and E^vee -> F^vee are mutually perpendicular,
    (ii) H_alpha is perpendicular to H^vee_sigma(alpha),
    (iii) j^vee_{alpha beta} = j_{beta alpha}^T when both sides carry j-maps.
    """
    G = cert.pairing
    out = {"perfect": cert.perfect, "kernels": None, "subspaces": {}, "j_identity": None, "witnesses": []}
    if not cert.perfect or G.rows != za.dim_z or G.cols != zb.dim_z:
        out["passed"] = False
        out["witnesses"].append("pairing is not perfect between Z_2 and Z_2^vee")
        return out
    # Phi: Z_2 -> (Z_2^vee)^*, zeta -> G(zeta, .)
    def phi(S: Subspace) -> Subspace:
        return Subspace.span([[sum((v[i] * G[i, j] for i in range(G.rows)), Fraction(0)) for j in range(G.cols)]
                              for v in S.basis], G.cols)
    U = Subspace.span(za.incl.entries, za.dim_z) if za.dim_u else Subspace.zero(za.dim_z)
    Uv = Subspace.span(zb.incl.entries, zb.dim_z) if zb.dim_u else Subspace.zero(zb.dim_z)
    out["kernels"] = phi(U) == annihilator(Uv)
    if not out["kernels"]:
        out["witnesses"].append("U is not perpendicular to U^vee under the pairing")
    ok = out["kernels"]
    if set(cert.bijection) != set(za.index) or sorted(map(str, cert.bijection.values())) != sorted(map(str, zb.index)):
        out["witnesses"].append("bijection does not match the index sets")
        out["passed"] = False
        return out
    for a in za.index:
        b = cert.bijection[a]
        kh = kernel(za.h[a]) if za.dim_u else Subspace.full(za.dim_z)
        Hb = zb.h[b].row_space() if zb.dim_u else Subspace.zero(zb.dim_z)
        good = phi(kh) == Hb
        out["subspaces"][str(a)] = good
        if not good:
            ok = False
            out["witnesses"].append(f"H_{a} is not perpendicular to H^vee_{b}")
    if za.j is not None and zb.j is not None:
        jok = True
        for a, b in itertools.product(za.index, repeat=2):
            lhs = zb.j[(cert.bijection[a], cert.bijection[b])]
            rhs = za.j[(b, a)].transpose()
            if lhs != rhs:
                jok = False
                out["witnesses"].append(f"j^vee_({a},{b}) differs from j_({b},{a})^T")
        out["j_identity"] = jok
        ok = ok and jok
    out["passed"] = ok
    return out


# hand-coded examples ------------------------------------------------------------------


def _mat(rows):
    return RationalMatrix.from_rows(rows)


def p2_localization() -> LocalizationAlgebra:
    """T-equivariant H^*(P^2): Z_2 = <b1,b2,b3>, U = <b1-b2, b2-b3>.

    At the fixed point off L_k, b_i restricts to b_i - b_k.
    """
    incl = _mat([[1, -1, 0], [0, 1, -1]])
    index = ("L2L3", "L1L3", "L1L2")
    h = {}
    for k, name in enumerate(index):
        cols = []
        for i in range(3):
            v = [Fraction(0)] * 3
            v[i] += 1
            v[k] -= 1
            # b_i - b_k in the basis (b1-b2, b2-b3): coefficients (v1, v1+v2)
            cols.append([v[0], v[0] + v[1]])
        h[name] = RationalMatrix.from_rows([[c[r] for c in cols] for r in range(2)])
    return LocalizationAlgebra(index, ("b1-b2", "b2-b3"), ("b1", "b2", "b3"), incl, h)


def two_lines_localization() -> LocalizationAlgebra:
    """Two lines meeting in a point: u = c1 + c2 + c3 and c_i restricts to delta_ij u at p_j."""
    incl = _mat([[1, 1, 1]])
    index = ("p1", "p2", "p3")
    h = {p: _mat([[int(i == j) for i in range(3)]]) for j, p in enumerate(index)}
    return LocalizationAlgebra(index, ("u",), ("c1", "c2", "c3"), incl, h)


def first_duality_certificate() -> DualityCertificate:
    """b_i and c_i dual coordinates; L_i cap L_j goes to p_k."""
    return DualityCertificate(RationalMatrix.identity(3), {"L2L3": "p1", "L1L3": "p2", "L1L2": "p3"})
