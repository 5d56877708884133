"""Shipped instances and small instance generators."""
from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources

from .highest_weight import OrderedPresentation
from .instances import Instance, parse_instance
from .quiver import Arrow, QuadraticPresentation, Quiver

SHIPPED = ("a11", "a12", "a22", "sl3", "sl3_dual", "semisimple", "counterexample",
           "p2", "twolines", "arrangement", "degenerate", "blocks")


def data_text(name: str) -> str:
    return resources.files("koszulgm").joinpath("data").joinpath(f"{name}.txt").read_text(encoding="utf-8")


def shipped(name: str) -> Instance:
    if name not in SHIPPED:
        raise KeyError(f"no shipped instance {name!r}; choose from {', '.join(SHIPPED)}")
    return parse_instance(data_text(name))


def a_rs(r: int, s: int) -> OrderedPresentation:
    """r arrows 1 -> 2, s arrows 2 -> 1, every y_j x_i = 0, order 1 < 2."""
    xs = [Arrow(f"x{i + 1}", "1", "2") for i in range(r)]
    ys = [Arrow(f"y{j + 1}", "2", "1") for j in range(s)]
    q = Quiver(("1", "2"), tuple(xs + ys))
    rels = [{(y.name, x.name): 1} for y in ys for x in xs]
    return OrderedPresentation.chain(QuadraticPresentation.from_relations(q, rels), ["1", "2"])


def standard_koszul_builtins() -> dict[str, OrderedPresentation]:
    """Ordered quiver instances known to be standard Koszul."""
    out = {}
    for name in ("a11", "a12", "a22", "sl3", "sl3_dual", "semisimple"):
        inst = shipped(name)
        out[name] = inst.extra["order"]
    out["a21"] = a_rs(2, 1)
    return out


def random_presentation(rng: random.Random, max_vertices: int = 4, max_arrows: int = 6,
                        span: int = 3) -> QuadraticPresentation:
    """Random quiver with random relation subspaces in each (source, target) component."""
    nv = rng.randint(1, max_vertices)
    verts = tuple(str(i + 1) for i in range(nv))
    na = rng.randint(1, max_arrows)
    arrows = tuple(Arrow(f"a{i + 1}", rng.choice(verts), rng.choice(verts)) for i in range(na))
    q = Quiver(verts, arrows)
    rels = []
    for s in verts:
        for t in verts:
            paths = q.paths2(s, t)
            if not paths:
                continue
            for _ in range(rng.randint(0, len(paths))):
                rel = {p: Fraction(rng.randint(-span, span)) for p in paths}
                rel = {p: c for p, c in rel.items() if c}
                if rel:
                    rels.append(rel)
    return QuadraticPresentation.from_relations(q, rels)
