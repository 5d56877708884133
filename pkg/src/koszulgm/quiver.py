"""Quivers and quadratic presentations.

Paths compose left to right: for x: 1 -> 2 and y: 2 -> 1 the word ``xy``
is a loop at vertex 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import Subspace, annihilator, to_fraction


class PresentationError(ValueError):
    """Malformed quiver or relation data."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        arr = tuple(a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2])) for a in self.arrows)
        object.__setattr__(self, "arrows", arr)
        if len(set(vs)) != len(vs):
            raise PresentationError("duplicate vertex label")
        names = [a.name for a in arr]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate arrow id")
        for a in arr:
            if a.source not in vs or a.target not in vs:
                raise PresentationError(f"arrow {a.name} uses an unknown vertex")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow {name!r}")

    @property
    def loops(self) -> list[Arrow]:
        return [a for a in self.arrows if a.source == a.target]

    def paths2(self, source: str, target: str) -> list[tuple[str, str]]:
        """Length-two paths source -> target, lexicographic in arrow order."""
        return [(a.name, b.name) for a in self.arrows if a.source == source
                for b in self.arrows if a.target == b.source and b.target == target]

    def paths(self, d: int) -> list[tuple[str, str, tuple]]:
        """All (source, target, word) of length d."""
        if d == 0:
            return [(v, v, ()) for v in self.vertices]
        out = [(a.source, a.target, (a.name,)) for a in self.arrows]
        for _ in range(d - 1):
            out = [(s, b.target, w + (b.name,)) for s, t, w in out for b in self.arrows if b.source == t]
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen, todo = {self.vertices[0]}, [self.vertices[0]]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)


def _dual_name(name: str) -> str:
    return name[:-1] if name.endswith("!") else name + "!"


@dataclass(frozen=True)
class QuadraticPresentation:
    """Quiver plus a space W of quadratic relations, kept canonical per component.

    ``relations`` maps (source, target) to the RREF basis of W in the
    coordinates of ``quiver.paths2(source, target)``; empty components are
    omitted.
    """

    quiver: Quiver
    relations: tuple = field(default=())  # ((source, target), rows) pairs

    @classmethod
    def from_relations(cls, quiver: Quiver, rels: Iterable[Mapping]) -> "QuadraticPresentation":
        """Build from dicts {(a, b): coeff}; each must be component-pure."""
        by_comp: dict[tuple, list] = {}
        for rel in rels:
            rel = {tuple(k): to_fraction(v) for k, v in rel.items() if to_fraction(v)}
            if not rel:
                continue
            comps = set()
            for a, b in rel:
                x, y = quiver.arrow(a), quiver.arrow(b)
                if x.target != y.source:
                    raise PresentationError(f"non-composable pair {a}*{b}")
                comps.add((x.source, y.target))
            if len(comps) != 1:
                raise PresentationError(f"relation is not component-pure: {sorted(comps)}")
            comp = comps.pop()
            cols = quiver.paths2(*comp)
            by_comp.setdefault(comp, []).append([rel.get(p, Fraction(0)) for p in cols])
        return cls._canonical(quiver, {c: Subspace.span(r, len(quiver.paths2(*c))) for c, r in by_comp.items()})

    @classmethod
    def _canonical(cls, quiver: Quiver, spaces: Mapping) -> "QuadraticPresentation":
        order = {v: i for i, v in enumerate(quiver.vertices)}
        items = sorted(((c, s.basis) for c, s in spaces.items() if s.dim),
                       key=lambda cs: (order[cs[0][0]], order[cs[0][1]]))
        return cls(quiver, tuple(items))

    def relation_space(self, source: str, target: str) -> Subspace:
        n = len(self.quiver.paths2(source, target))
        for c, rows in self.relations:
            if c == (source, target):
                return Subspace(n, rows)
        return Subspace.zero(n)

    def components(self) -> list[tuple[str, str]]:
        return [(s, t) for s in self.quiver.vertices for t in self.quiver.vertices]

    def relation_dicts(self) -> list[dict]:
        out = []
        for (s, t), rows in self.relations:
            cols = self.quiver.paths2(s, t)
            for r in rows:
                out.append({p: c for p, c in zip(cols, r) if c})
        return out

    @property
    def dim_w(self) -> int:
        return sum(len(rows) for _, rows in self.relations)

    def same_relations(self, other: "QuadraticPresentation") -> bool:
        """Equality of quivers and of relation spans, component by component."""
        return self.quiver == other.quiver and self.relations == other.relations

    def __str__(self):
        lines = [f"vertices {' '.join(self.quiver.vertices)}"]
        lines += [f"{a.name}: {a.source} -> {a.target}" for a in self.quiver.arrows]
        for rel in self.relation_dicts():
            lines.append(format_relation(rel))
        return "\n".join(lines)


def format_relation(rel: Mapping) -> str:
    parts = []
    for (a, b), c in rel.items():
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag}*"
        parts.append(("- " if c < 0 else "+ ") + f"{coef}{a}*{b}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def quadratic_dual(pres: QuadraticPresentation) -> QuadraticPresentation:
    """Relations W^perp on the reversed quiver.

    A dual arrow a! runs target(a) -> source(a).  The pairing is
    <f g, m m'> = f(m') g(m), so the dual word a!b! pairs with the word ba.
    """
    q = pres.quiver
    dq = Quiver(q.vertices, tuple(Arrow(_dual_name(a.name), a.target, a.source) for a in q.arrows))
    spaces = {}
    for s, t in pres.components():
        dcols = dq.paths2(s, t)
        if not dcols:
            continue
        ocols = q.paths2(t, s)
        pos = {p: i for i, p in enumerate(ocols)}
        # dual word (f, g) pairs with original word (g*, f*)
        perm = [pos[(_dual_name(g), _dual_name(f))] for f, g in dcols]
        w = pres.relation_space(t, s)
        rows = [[r[perm[j]] for j in range(len(dcols))] for r in w.basis]
        spaces[(s, t)] = annihilator(Subspace(len(dcols), tuple(tuple(r) for r in rows))) if rows else Subspace.full(len(dcols))
    return QuadraticPresentation._canonical(dq, spaces)


def opposite(pres: QuadraticPresentation) -> QuadraticPresentation:
    """Reverse every arrow and every relation word; arrow names are kept."""
    q = pres.quiver
    oq = Quiver(q.vertices, tuple(Arrow(a.name, a.target, a.source) for a in q.arrows))
    rels = [{(b, a): c for (a, b), c in r.items()} for r in pres.relation_dicts()]
    return QuadraticPresentation.from_relations(oq, rels)


def relabel(pres: QuadraticPresentation, arrows: Mapping[str, str] | None = None,
            vertices: Mapping[str, str] | None = None, scale: Mapping[str, Fraction] | None = None
            ) -> QuadraticPresentation:
    """Rename arrows/vertices (and optionally rescale arrows); arrow order follows the new names' original positions."""
    arrows = dict(arrows or {})
    vertices = dict(vertices or {})
    scale = dict(scale or {})
    q = pres.quiver
    nq = Quiver(tuple(vertices.get(v, v) for v in q.vertices),
                tuple(Arrow(arrows.get(a.name, a.name), vertices.get(a.source, a.source), vertices.get(a.target, a.target))
                      for a in q.arrows))
    rels = []
    for r in pres.relation_dicts():
        rels.append({(arrows.get(a, a), arrows.get(b, b)): c * to_fraction(scale.get(a, 1)) * to_fraction(scale.get(b, 1))
                     for (a, b), c in r.items()})
    return QuadraticPresentation.from_relations(nq, rels)


def reorder_arrows(pres: QuadraticPresentation, names: Iterable[str]) -> QuadraticPresentation:
    q = pres.quiver
    nq = Quiver(q.vertices, tuple(q.arrow(n) for n in names))
    if set(nq.arrows) != set(q.arrows):
        raise PresentationError("reordering must be a permutation of the arrows")
    return QuadraticPresentation.from_relations(nq, pres.relation_dicts())


def same_span_up_to_order(p: QuadraticPresentation, r: QuadraticPresentation) -> bool:
    """Relation spans agree once both sides use the same arrow order."""
    if set(p.quiver.arrows) != set(r.quiver.arrows) or set(p.quiver.vertices) != set(r.quiver.vertices):
        return False
    r2 = reorder_arrows(r, [a.name for a in p.quiver.arrows])
    r2 = QuadraticPresentation.from_relations(p.quiver, r2.relation_dicts())
    return p.same_relations(r2)
