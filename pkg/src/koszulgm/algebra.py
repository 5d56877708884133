"""Graded quotients of weighted path algebras, built degree by degree.

A letter is an arrow (weight 1) or, for deformations, a central loop of
weight 2.  Degree d of the quotient is

    A_d = (sum over letters l of A_{d - wt l} (x) l) / span{c . r},

where c runs over a basis of A_{d - wt r} and r over the relations.  The
relation rows are reduced to RREF; the non-pivot columns are the normal
monomials, and the reduced rows give the rewriting table.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Subspace, kernel_rows, sparse_rref, to_fraction
from .quiver import QuadraticPresentation

Mono = tuple  # (source, target, word)
Element = dict  # Mono -> Fraction


class CapExceeded(RuntimeError):
    """The algebra did not terminate (or a product left the computed range)."""

    def __init__(self, msg: str, trace: Sequence[int] = ()):
        super().__init__(msg)
        self.trace = list(trace)


@dataclass(frozen=True)
class Letter:
    name: str
    source: str
    target: str
    weight: int = 1


def add_into(acc: dict, x: Mapping, c=1):
    for k, v in x.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def scale(x: Mapping, c) -> dict:
    c = to_fraction(c)
    return {k: v * c for k, v in x.items()} if c else {}


class GradedAlgebra:
    """Finite graded quotient with normal-form monomial bases.

    ``basis[d]`` is the ordered list of normal monomials in degree d.
    If ``finite`` is false the build stops at ``cap`` and products leaving
    that range raise CapExceeded.
    """

    def __init__(self, vertices: Sequence[str], letters: Sequence[Letter], relations: Iterable[Mapping],
                 cap: int = 12, finite: bool = True, presentation: QuadraticPresentation | None = None):
        self.vertices = tuple(vertices)
        self.letters = tuple(letters)
        self.letter = {l.name: l for l in self.letters}
        self.presentation = presentation
        self.cap = cap
        self.relations = []
        for r in relations:
            r = {tuple(w): to_fraction(c) for w, c in r.items() if c}
            if r:
                self.relations.append(r)
        self._check_relations()
        self.basis: list[list[Mono]] = [[(v, v, ()) for v in self.vertices]]
        self.index: list[dict] = [{m: i for i, m in enumerate(self.basis[0])}]
        self._rmul: dict = {}
        self.top_degree: int | None = None
        self._build(finite)
        self.finite = finite

    # construction -------------------------------------------------------

    def _check_relations(self):
        self._rel_info = []
        for r in self.relations:
            comps, wts = set(), set()
            for w in r:
                ls = [self.letter[n] for n in w]
                for a, b in zip(ls, ls[1:]):
                    if a.target != b.source:
                        raise ValueError(f"non-composable word {w}")
                comps.add((ls[0].source, ls[-1].target))
                wts.add(sum(l.weight for l in ls))
            if len(comps) != 1 or len(wts) != 1:
                raise ValueError("relations must be homogeneous and component-pure")
            self._rel_info.append((comps.pop(), wts.pop()))

    def weight(self, word: Sequence[str]) -> int:
        return sum(self.letter[n].weight for n in word)

    def _build(self, finite: bool):
        for d in range(1, self.cap + 1):
            cols: list[tuple[Mono, str]] = []
            for wt in sorted({l.weight for l in self.letters}):
                if wt > d:
                    continue
                for b in self.basis[d - wt]:
                    for l in self.letters:
                        if l.weight == wt and l.source == b[1]:
                            cols.append((b, l.name))
            colpos = {c: i for i, c in enumerate(cols)}
            rows = []
            for r, ((src, _), wr) in zip(self.relations, self._rel_info):
                if wr > d:
                    continue
                for p in self.basis[d - wr]:
                    if p[1] != src:
                        continue
                    row: dict = {}
                    for w, c in r.items():
                        head = self._mul_word({p: Fraction(1)}, w[:-1])
                        for m, v in head.items():
                            k = colpos[(m, w[-1])]
                            row[k] = row.get(k, 0) + c * v
                    rows.append(row)
            piv = sparse_rref(rows)
            free = [i for i in range(len(cols)) if i not in piv]
            monos = [self._extend(*cols[i]) for i in free]
            self.basis.append(monos)
            self.index.append({m: i for i, m in enumerate(monos)})
            for i in free:
                self._rmul[cols[i]] = {self._extend(*cols[i]): Fraction(1)}
            for p, row in piv.items():
                self._rmul[cols[p]] = {self._extend(*cols[k]): -v for k, v in row.items() if k != p}
            if finite and not monos:
                self.top_degree = d - 1
                self.basis.pop()
                self.index.pop()
                return
        if finite:
            raise CapExceeded(f"not finite-dimensional within cap {self.cap}", self.dims)

    def _extend(self, b: Mono, name: str) -> Mono:
        l = self.letter[name]
        return (b[0], l.target, b[2] + (name,))

    # arithmetic -----------------------------------------------------------

    @property
    def max_degree(self) -> int:
        return self.top_degree if self.top_degree is not None else self.cap

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def degree(self, m: Mono) -> int:
        return self.weight(m[2])

    def mul_letter(self, x: Mapping, name: str) -> dict:
        out: dict = {}
        l = self.letter[name]
        for m, c in x.items():
            if m[1] != l.source:
                continue
            d = self.degree(m) + l.weight
            if d > self.max_degree:
                if self.top_degree is None:
                    raise CapExceeded(f"product in degree {d} beyond computed cap {self.cap}")
                continue
            add_into(out, self._rmul[(m, name)], c)
        return out

    def _mul_word(self, x: Mapping, word: Sequence[str]) -> dict:
        for n in word:
            x = self.mul_letter(x, n)
            if not x:
                break
        return dict(x)

    def idempotent(self, v: str) -> dict:
        return {(v, v, ()): Fraction(1)}

    def one(self) -> dict:
        return {(v, v, ()): Fraction(1) for v in self.vertices}

    def word(self, *names: str, coeff=1) -> dict:
        """Normal form of a word (letters left to right)."""
        if not names:
            raise ValueError("use idempotent() for the empty word")
        start = self.idempotent(self.letter[names[0]].source)
        return scale(self._mul_word(start, names), coeff)

    def combo(self, terms: Mapping) -> dict:
        """Normal form of sum c * word over {word tuple: c}."""
        out: dict = {}
        for w, c in terms.items():
            add_into(out, self.word(*w) if w else {}, to_fraction(c))
        return out

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for m, c in y.items():
            left = {k: v for k, v in x.items() if k[1] == m[0]}
            if left:
                add_into(out, self._mul_word(left, m[2]), c)
        return out

    # coordinates ------------------------------------------------------------

    def vector(self, x: Mapping, d: int) -> list[Fraction]:
        v = [Fraction(0)] * len(self.basis[d])
        idx = self.index[d]
        for m, c in x.items():
            if m not in idx:
                raise ValueError(f"{m} is not a degree-{d} normal monomial")
            v[idx[m]] += c
        return v

    def element(self, v: Sequence, d: int) -> dict:
        return {m: to_fraction(c) for m, c in zip(self.basis[d], v) if c}

    def component_indices(self, d: int, source: str, target: str) -> list[int]:
        return [i for i, m in enumerate(self.basis[d]) if m[0] == source and m[1] == target]

    def component_dim(self, d: int, source: str, target: str) -> int:
        return len(self.component_indices(d, source, target))

    def homogeneous_parts(self, x: Mapping) -> dict[int, dict]:
        out: dict = {}
        for m, c in x.items():
            out.setdefault(self.degree(m), {})[m] = c
        return out

    # center -------------------------------------------------------------------

    def center_degree(self, d: int, generators: Sequence[str] | None = None) -> Subspace:
        """Degree-d central elements, as a subspace of A_d in basis coordinates.

        Centrality is tested against idempotents (support on loops) and the
        given generators, by default all weight-1 letters.
        """
        if d > self.max_degree:
            return Subspace.zero(0)
        gens = [l.name for l in self.letters if l.weight == 1] if generators is None else list(generators)
        diag = [i for i, m in enumerate(self.basis[d]) if m[0] == m[1]]
        n = len(self.basis[d])
        if not diag:
            return Subspace.zero(n)
        cols = []
        for i in diag:
            m = self.basis[d][i]
            x = {m: Fraction(1)}
            col: dict = {}
            for g in gens:
                l = self.letter[g]
                e = self.degree(m) + l.weight
                if e > self.max_degree:
                    if self.top_degree is None:
                        raise CapExceeded(f"center in degree {d} needs degree {e} beyond cap {self.cap}")
                    continue
                comm = add_into(dict(self.mul_letter(x, g)), self.mul(self.word(g), x), -1)
                for k, v in comm.items():
                    key = (g, k)
                    col[key] = col.get(key, 0) + v
            cols.append(col)
        keys = sorted({k for c in cols for k in c}, key=repr)
        rows = [[c.get(k, Fraction(0)) for c in cols] for k in keys]
        ker = kernel_rows(rows, len(diag)) if rows else [[Fraction(int(i == j)) for j in range(len(diag))] for i in range(len(diag))]
        vecs = []
        for kv in ker:
            full = [Fraction(0)] * n
            for i, c in zip(diag, kv):
                full[i] = c
            vecs.append(full)
        return Subspace.span(vecs, n)

    # checks ---------------------------------------------------------------

    def associativity_failures(self, max_degree: int | None = None, limit: int = 5) -> list:
        top = self.max_degree if max_degree is None else max_degree
        monos = [m for d in range(top + 1) for m in self.basis[d]]
        bad = []
        for a in monos:
            for b in monos:
                if a[1] != b[0] or self.degree(a) + self.degree(b) > top:
                    continue
                ab = self.mul({a: 1}, {b: 1})
                for c in monos:
                    if b[1] != c[0] or self.degree(a) + self.degree(b) + self.degree(c) > top:
                        continue
                    if self.mul(ab, {c: 1}) != self.mul({a: 1}, self.mul({b: 1}, {c: 1})):
                        bad.append((a, b, c))
                        if len(bad) >= limit:
                            return bad
        return bad

    def structure_constants(self) -> dict:
        """{(m, n): product} for composable normal monomials within range."""
        out = {}
        monos = [m for b in self.basis for m in b]
        for a in monos:
            for b in monos:
                if a[1] == b[0] and self.degree(a) + self.degree(b) <= self.max_degree:
                    out[(a, b)] = self.mul({a: Fraction(1)}, {b: Fraction(1)})
        return out

    def format(self, x: Mapping) -> str:
        return format_element(x)


def format_mono(m: Mono) -> str:
    return "*".join(m[2]) if m[2] else f"e{m[0]}"


def format_element(x: Mapping) -> str:
    if not x:
        return "0"
    parts = []
    for m, c in sorted(x.items(), key=lambda mc: (len(mc[0][2]), mc[0])):
        mag = abs(c)
        s = format_mono(m) if mag == 1 else f"{mag}*{format_mono(m)}"
        parts.append(("- " if c < 0 else "+ ") + s)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def build_graded_algebra(pres: QuadraticPresentation, cap: int = 12, finite: bool = True) -> GradedAlgebra:
    """A = T_R(M)/<W>, degree by degree; errors if A_cap is still nonzero."""
    if cap < 2:
        raise ValueError("cap must be at least 2")
    q = pres.quiver
    letters = [Letter(a.name, a.source, a.target, 1) for a in q.arrows]
    return GradedAlgebra(q.vertices, letters, pres.relation_dicts(), cap=cap, finite=finite, presentation=pres)


def center_degree(alg: GradedAlgebra, d: int) -> Subspace:
    return alg.center_degree(d)
