"""Exact linear algebra over the rationals.

Everything downstream (perps, centers, kernels of module maps, LP
certificates) goes through this module, so the pivoting rule is fixed:
first nonzero column, topmost remaining row, pivot normalized to 1.
That makes reduced echelon forms, and therefore every stored subspace
basis, canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction


class AmbientMismatch(ValueError):
    """Two subspaces (or a matrix and a vector) live in different spaces."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'p/q' strings")
    return Fraction(x)


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    # in-place on a private copy; returns nonzero rows and pivot columns
    m = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        row = m[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            for j in range(c, ncols):
                if row[j]:
                    row[j] *= inv
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = m[i][c]
            if f:
                other = m[i]
                for j in nz:
                    other[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for an empty matrix")
            cols = len(data[0])
        for r in data:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise AmbientMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_o = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * col[k] for k, a in nz), Fraction(0)) for col in cols_o))
        return RationalMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise AmbientMismatch("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def rank(self) -> int:
        return len(_rref_rows([list(r) for r in self.entries], self.cols)[1])

    def row_space(self) -> "Subspace":
        return Subspace.span(self.entries, self.cols)

    def column_space(self) -> "Subspace":
        return Subspace.span(self.transpose().entries, self.rows)

    def inverse(self) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.entries)]
        red, piv = _rref_rows(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return RationalMatrix(n, n, tuple(tuple(r[n:]) for r in red[:n]))


def reduce(m: RationalMatrix) -> RationalMatrix:
    """Unique reduced row-echelon form; zero rows are moved to the bottom so the shape is kept."""
    red, _ = _rref_rows([list(r) for r in m.entries], m.cols)
    z = (Fraction(0),) * m.cols
    rows = [tuple(r) for r in red] + [z] * (m.rows - len(red))
    return RationalMatrix(m.rows, m.cols, tuple(rows))


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """List-level RREF used by the hot loops; returns (nonzero rows, pivot columns)."""
    return _rref_rows([[to_fraction(x) for x in r] for r in rows], ncols)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n stored by its canonical (RREF) basis."""

    ambient_dim: int
    basis: tuple  # tuple of RREF row tuples

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            vecs.append([to_fraction(x) for x in v])
        red, _ = _rref_rows(vecs, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        out = []
        for r in self.basis:
            for j, x in enumerate(r):
                if x:
                    out.append(j)
                    break
        return out

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.dim, self.ambient_dim, self.basis)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence):
        """Coefficients of v in the stored basis, or None if v is not in the span."""
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector length does not match ambient dimension")
        rest = [to_fraction(x) for x in v]
        coords = []
        for row, p in zip(self.basis, self.pivots):
            c = rest[p]
            coords.append(c)
            if c:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        rest[j] -= c * row[j]
        if any(rest):
            return None
        return tuple(coords)

    def residue(self, v: Sequence) -> Vector:
        """Canonical representative of v modulo this subspace."""
        rest = [to_fraction(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            c = rest[p]
            if c:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        rest[j] -= c * row[j]
        return tuple(rest)


def kernel(m: RationalMatrix) -> Subspace:
    """Right null space {v : m v = 0}."""
    red, piv = _rref_rows([list(r) for r in m.entries], m.cols)
    pivset = set(piv)
    vecs = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def kernel_rows(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Null space basis (not re-canonicalized) of a list-level matrix."""
    red, piv = _rref_rows([[to_fraction(x) for x in r] for r in rows], ncols)
    pivset = set(piv)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        out.append(v)
    return out


def annihilator(s: Subspace) -> Subspace:
    """s^perp in the dual coordinate space, under the standard dot pairing."""
    return kernel(RationalMatrix(s.dim, s.ambient_dim, s.basis)) if s.dim else Subspace.full(s.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    return annihilator(annihilator(a) + annihilator(b))


def solve(m: RationalMatrix, b: Sequence):
    """One solution x of m x = b (free variables set to zero), or None."""
    aug = [list(r) + [to_fraction(y)] for r, y in zip(m.entries, b)]
    red, piv = _rref_rows(aug, m.cols + 1)
    if piv and piv[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(red, piv):
        x[p] = row[m.cols]
    return tuple(x)


def fmt(x: Fraction) -> str:
    """Serialize a rational as 'p/q' (or 'p' for integers)."""
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sparse_rref(rows: Iterable[dict]) -> dict[int, dict[int, Fraction]]:
    """Incremental RREF on sparse rows {col: value}; returns {pivot col: reduced row}.

    The result equals the dense RREF of the same row space (RREF is unique),
    so callers get the canonical pivot rule without paying for dense rows.
    """
    piv: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: to_fraction(v) for c, v in raw.items() if v}
        while True:
            hit = [c for c in row if c in piv]
            if not hit:
                break
            for c in hit:
                f = row.get(c)
                if not f:
                    continue
                for k, v in piv[c].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        if inv != 1:
            row = {k: v * inv for k, v in row.items()}
        for c, prow in piv.items():
            f = prow.get(lead)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        piv[lead] = row
    return dict(sorted(piv.items()))
