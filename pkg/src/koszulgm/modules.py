"""Graded right modules over a GradedAlgebra, and minimal projective resolutions.

Every module here is a quotient F/S of a free module F = sum_k e_{v_k} A <s_k>
by a graded submodule S, stored degree by degree.  Kernels of maps between
such modules are again submodules of free modules, which is all a
resolution needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import GradedAlgebra
from .linalg import Subspace, kernel_rows

FreeElt = dict  # (k, mono) -> Fraction


class ModuleError(ValueError):
    pass


class FreeModule:
    """sum_k e_{v_k} A <s_k>; basis in degree d is (k, m) with deg m = d - s_k."""

    def __init__(self, alg: GradedAlgebra, summands: Sequence[tuple[str, int]], max_degree: int | None = None):
        self.alg = alg
        self.summands = [(str(v), int(s)) for v, s in summands]
        top = max((s for _, s in self.summands), default=0) + alg.max_degree
        self.max_degree = top if max_degree is None else min(top, max_degree)
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}

    @property
    def min_degree(self) -> int:
        return min((s for _, s in self.summands), default=0)

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def basis(self, d: int) -> list:
        if d not in self._basis:
            out = []
            for k, (v, s) in enumerate(self.summands):
                e = d - s
                if 0 <= e <= self.alg.max_degree:
                    out += [(k, m) for m in self.alg.basis[e] if m[0] == v]
            self._basis[d] = out
            self._index[d] = {b: i for i, b in enumerate(out)}
        return self._basis[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d)) if d <= self.max_degree else 0

    def label(self, d: int, i: int) -> str:
        return self.basis(d)[i][1][1]

    def vector(self, x: Mapping, d: int) -> list[Fraction]:
        b = self.basis(d)
        idx = self._index[d]
        v = [Fraction(0)] * len(b)
        for key, c in x.items():
            v[idx[key]] += c
        return v

    def element(self, v: Sequence, d: int) -> FreeElt:
        return {b: Fraction(c) for b, c in zip(self.basis(d), v) if c}

    def generator(self, k: int) -> FreeElt:
        v = self.summands[k][0]
        return {(k, (v, v, ())): Fraction(1)}

    def act(self, x: Mapping, name: str) -> FreeElt:
        """x . letter, dropping terms beyond max_degree."""
        out: dict = {}
        wt = self.alg.letter[name].weight
        for (k, m), c in x.items():
            if self.summands[k][1] + self.alg.degree(m) + wt > self.max_degree:
                continue
            for m2, c2 in self.alg.mul_letter({m: c}, name).items():
                out[(k, m2)] = out.get((k, m2), 0) + c2
        return {key: c for key, c in out.items() if c}

    def act_mono(self, x: Mapping, mono) -> FreeElt:
        if not mono[2]:
            return {key: c for key, c in x.items() if key[1][1] == mono[0]}
        for n in mono[2]:
            x = self.act(x, n)
        return x

    def degree_of(self, key) -> int:
        k, m = key
        return self.summands[k][1] + self.alg.degree(m)


def generate_submodule(free: FreeModule, gens: Sequence[Mapping]) -> dict[int, Subspace]:
    """Smallest graded submodule containing the given homogeneous elements."""
    by_deg: dict[int, list] = {}
    for g in gens:
        if not g:
            continue
        degs = {free.degree_of(key) for key in g}
        if len(degs) != 1:
            raise ModuleError("generators must be homogeneous")
        by_deg.setdefault(degs.pop(), []).append(g)
    sub: dict[int, Subspace] = {}
    for d in free.degrees():
        vecs = [free.vector(g, d) for g in by_deg.get(d, [])]
        for l in free.alg.letters:
            prev = sub.get(d - l.weight)
            if prev is None:
                continue
            for row in prev.basis:
                img = free.act(free.element(row, d - l.weight), l.name)
                if img:
                    vecs.append(free.vector(img, d))
        sub[d] = Subspace.span(vecs, free.dim(d))
    return sub


class GradedRightModule:
    """F / S with the quotient basis given by the non-pivot coordinates of S_d."""

    def __init__(self, free: FreeModule, sub: Mapping[int, Subspace] | None = None, name: str = ""):
        self.free = free
        self.alg = free.alg
        self.name = name
        self.sub = {d: (sub or {}).get(d, Subspace.zero(free.dim(d))) for d in free.degrees()}
        self._free_idx = {}
        for d, s in self.sub.items():
            piv = set(s.pivots)
            self._free_idx[d] = [i for i in range(free.dim(d)) if i not in piv]

    def degrees(self) -> list[int]:
        return [d for d in self.free.degrees() if self.dim_at(d)]

    def dim_at(self, d: int) -> int:
        return len(self._free_idx.get(d, ()))

    @property
    def dims(self) -> dict[int, int]:
        return {d: self.dim_at(d) for d in self.free.degrees() if self.dim_at(d)}

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def labels(self, d: int) -> list[str]:
        return [self.free.label(d, i) for i in self._free_idx.get(d, ())]

    def dim_at_vertex(self, d: int, v: str) -> int:
        return self.labels(d).count(v)

    def project(self, x: Mapping, d: int) -> list[Fraction]:
        """Coordinates in the quotient basis of a free-module element of degree d."""
        if d not in self.sub:
            return []
        r = self.sub[d].residue(self.free.vector(x, d))
        return [r[i] for i in self._free_idx[d]]

    def lift(self, v: Sequence, d: int) -> FreeElt:
        full = [Fraction(0)] * self.free.dim(d)
        for i, c in zip(self._free_idx[d], v):
            full[i] = Fraction(c)
        return self.free.element(full, d)

    def act(self, v: Sequence, d: int, name: str) -> list[Fraction]:
        e = d + self.alg.letter[name].weight
        img = self.free.act(self.lift(v, d), name)
        return self.project(img, e) if e in self.sub else []

    def is_generated_in_degree(self, d0: int) -> bool:
        for d in self.degrees():
            if d < d0:
                return False
            if d == d0:
                continue
            img = []
            for l in self.alg.letters:
                if (d - l.weight) in self.sub:
                    for i in range(self.dim_at(d - l.weight)):
                        unit = [Fraction(int(i == j)) for j in range(self.dim_at(d - l.weight))]
                        img.append(self.act(unit, d - l.weight, l.name))
            if Subspace.span(img, self.dim_at(d)).dim != self.dim_at(d):
                return False
        return True


def projective(alg: GradedAlgebra, v: str, shift: int = 0, max_degree: int | None = None) -> GradedRightModule:
    return GradedRightModule(FreeModule(alg, [(v, shift)], max_degree), name=f"P{v}")


def simple(alg: GradedAlgebra, v: str, max_degree: int | None = None) -> GradedRightModule:
    free = FreeModule(alg, [(v, 0)], max_degree)
    gens = [{key: Fraction(1)} for d in free.degrees() if d > 0 for key in free.basis(d)]
    return GradedRightModule(free, generate_submodule(free, gens), name=f"L{v}")


def quotient_by_vertices(alg: GradedAlgebra, v: str, kill: set, max_degree: int | None = None) -> GradedRightModule:
    """e_v A / e_v A e A with e the sum of idempotents in ``kill``."""
    free = FreeModule(alg, [(v, 0)], max_degree)
    gens = [{key: Fraction(1)} for d in free.degrees() for key in free.basis(d) if key[1][1] in kill]
    return GradedRightModule(free, generate_submodule(free, gens), name=f"V{v}")


# resolutions ------------------------------------------------------------


@dataclass
class ResolutionStep:
    index: int
    summands: list  # (vertex, shift)
    linear: bool


@dataclass
class ResolutionReport:
    module: str
    steps: list = field(default_factory=list)
    length: int = 0
    complete: bool = False  # reached a zero kernel

    @property
    def linear(self) -> bool:
        return all(s.linear for s in self.steps)

    def as_dict(self) -> dict:
        return {
            "module": self.module,
            "length_computed": self.length,
            "terminates": self.complete,
            "linear": self.linear,
            "steps": [{"step": s.index, "projectives": [f"P{v}<{sh}>" for v, sh in s.summands], "linear": s.linear}
                      for s in self.steps],
        }


def _map_kernel(src: FreeModule, images: Sequence[Mapping], target: GradedRightModule) -> dict[int, Subspace]:
    """Kernel of the A-linear map src -> target sending generator k to images[k] (free elements)."""
    ker = {}
    for d in src.degrees():
        basis = src.basis(d)
        if not basis:
            ker[d] = Subspace.zero(0)
            continue
        cols = []
        for k, m in basis:
            img = target.free.act_mono(images[k], m)
            cols.append(target.project(img, d) if d in target.sub else [])
        nrows = target.dim_at(d) if d in target.sub else 0
        if nrows == 0:
            ker[d] = Subspace.full(len(basis))
            continue
        rows = [[cols[j][i] for j in range(len(basis))] for i in range(nrows)]
        ker[d] = Subspace.span(kernel_rows(rows, len(basis)), len(basis))
    return ker


def _top_generators(free: FreeModule, sub: Mapping[int, Subspace]) -> list[tuple[str, int, FreeElt]]:
    """Vertex-homogeneous elements whose images span sub / (sub . rad)."""
    out = []
    for d in free.degrees():
        s = sub.get(d)
        if s is None or s.dim == 0:
            continue
        img = []
        for l in free.alg.letters:
            prev = sub.get(d - l.weight)
            if prev is None:
                continue
            for row in prev.basis:
                x = free.act(free.element(row, d - l.weight), l.name)
                if x:
                    img.append(free.vector(x, d))
        have = Subspace.span(img, free.dim(d))
        if have.dim == s.dim:
            continue
        labels = [free.label(d, i) for i in range(free.dim(d))]
        for v in free.alg.vertices:
            for row in s.basis:
                part = [c if labels[i] == v else Fraction(0) for i, c in enumerate(row)]
                if any(part) and not have.contains(part):
                    have = have + Subspace.span([part], free.dim(d))
                    out.append((v, d, free.element(part, d)))
            if have.dim == s.dim:
                break
    return out


def linear_resolution(m: GradedRightModule, length: int) -> ResolutionReport:
    """Minimal graded projective resolution of m to the given length.

    Step i is linear when all its generators sit in degree i (m must be
    generated in degree 0).
    """
    alg = m.alg
    if m.degrees() and (min(m.degrees()) != 0 or not m.is_generated_in_degree(0)):
        raise ModuleError(f"{m.name or 'module'} is not generated in degree 0")
    rep = ResolutionReport(m.name)
    cap = max(m.free.max_degree, 0) + length + alg.max_degree + 1
    gens = [(lab, 0, m.lift([Fraction(int(i == j)) for j in range(m.dim_at(0))], 0))
            for i, lab in enumerate(m.labels(0))]
    target = m
    for step in range(length + 1):
        if not gens:
            rep.complete = True
            break
        summands = [(v, s) for v, s, _ in gens]
        rep.steps.append(ResolutionStep(step, summands, all(s == step for _, s in summands)))
        rep.length = step
        src = FreeModule(alg, summands, cap)
        ker = _map_kernel(src, [g for _, _, g in gens], target)
        target = GradedRightModule(src)
        gens = _top_generators(src, ker)
    else:
        rep.complete = not gens
    return rep
