"""Sectioned plain-text instance files.

Header lines are ``key = value``; sections start with ``[name]``.  Blank
lines and ``#`` comments are ignored.  Rationals are written ``p/q``.

quiver:        [vertices] [arrows] (id src dst) [relations] [order] [psi]
localization:  [u] [z] [index] [incl] [h <index>] [pairing] [bijection]
arrangement:   [space] [eta] [xi]
blocks:        [mu] [nu]  (header keys mu_origin, nu_origin, n)
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .arrangements import DualityCertificate, LocalizationAlgebra
from .blocks import BlockPair, Composition
from .highest_weight import OrderedPresentation
from .linalg import RationalMatrix
from .polarized import PolarizedArrangement
from .quiver import Arrow, PresentationError, QuadraticPresentation, Quiver

KINDS = ("quiver", "localization", "arrangement", "blocks")
HEADER_KEYS = {
    "quiver": {"kind", "name", "description"},
    "localization": {"kind", "name", "description"},
    "arrangement": {"kind", "name", "description"},
    "blocks": {"kind", "name", "description", "n", "mu_origin", "nu_origin"},
}
SECTIONS = {
    "quiver": {"vertices", "arrows", "relations", "order", "psi"},
    "localization": {"u", "z", "index", "incl", "h", "pairing", "bijection"},
    "arrangement": {"space", "eta", "xi"},
    "blocks": {"mu", "nu"},
}
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_'!]*$")
NUM_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class InstanceError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = f"line {line}" + (f", column {col}" if col else "") + ": " if line else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


@dataclass
class Instance:
    kind: str
    name: str
    digest: str
    data: Any
    header: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def _rational(tok: str, ln: int, col: int) -> Fraction:
    if not NUM_RE.match(tok):
        raise InstanceError(f"expected a rational p/q, got {tok!r}", ln, col)
    return Fraction(tok)


def _split(text: str):
    header, sections, starts = {}, {}, {}
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        s = line.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise InstanceError("unterminated section header", ln, len(raw))
            parts = s[1:-1].split()
            if not parts:
                raise InstanceError("empty section header", ln, 1)
            key = (parts[0], " ".join(parts[1:]))
            if key in sections:
                raise InstanceError(f"duplicate section [{s[1:-1]}]", ln, 1)
            sections[key] = []
            starts[key] = ln
            current = key
            continue
        if current is None:
            if "=" not in s:
                raise InstanceError("expected 'key = value' before the first section", ln, 1)
            k, v = (p.strip() for p in s.split("=", 1))
            if k in header:
                raise InstanceError(f"duplicate key {k!r}", ln, 1)
            header[k] = (v, ln)
            continue
        sections[current].append((ln, raw.find(s) + 1, s))
    return header, sections, starts


def digest(text: str) -> str:
    norm = "\n".join(line.rstrip() for line in text.strip().splitlines()) + "\n"
    return hashlib.sha256(norm.encode()).hexdigest()


def parse_instance(text: str) -> Instance:
    header, sections, starts = _split(text)
    if "kind" not in header:
        raise InstanceError("missing 'kind' header", 1)
    kind, kln = header["kind"]
    if kind not in KINDS:
        raise InstanceError(f"unknown kind {kind!r}", kln, 1)
    for k, (_, ln) in header.items():
        if k not in HEADER_KEYS[kind]:
            raise InstanceError(f"unknown key {k!r} for kind {kind}", ln, 1)
    for (sec, arg), lines in sections.items():
        if sec not in SECTIONS[kind]:
            raise InstanceError(f"unknown section [{sec}] for kind {kind}", starts[(sec, arg)], 1)
        if arg and sec != "h":
            raise InstanceError(f"section [{sec}] takes no argument", starts[(sec, arg)], 1)
    name = header.get("name", ("unnamed", 0))[0]
    hdr = {k: v for k, (v, _) in header.items()}
    parser = {"quiver": _parse_quiver, "localization": _parse_localization,
              "arrangement": _parse_arrangement, "blocks": _parse_blocks}[kind]
    data, extra = parser(sections, hdr)
    return Instance(kind, name, digest(text), data, hdr, extra)


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# quiver -----------------------------------------------------------------------------


def _need(sections, key):
    if (key, "") not in sections:
        raise InstanceError(f"missing section [{key}]")
    return sections[(key, "")]


def _tokens(lines):
    for ln, col, s in lines:
        for m in re.finditer(r"\S+", s):
            yield ln, col + m.start(), m.group()


def _at(s: str, needle: str, col: int) -> int:
    """Column of ``needle`` inside a line whose text starts at ``col``."""
    return col + max(s.find(needle), 0)


def parse_relation(s: str, quiver: Quiver, ln: int = 0, col: int = 1) -> dict:
    """'2*x*y - 1/2*y*x + z*w' -> {(a, b): coeff}."""
    s2 = s.replace(" ", "")
    if not s2:
        raise InstanceError("empty relation", ln, col)
    terms = re.findall(r"[+-]?[^+-]+", s2)
    if "".join(terms) != s2:
        raise InstanceError(f"cannot parse relation {s!r}", ln, col)
    rel: dict = {}
    for t in terms:
        sign = -1 if t.startswith("-") else 1
        body = t.lstrip("+-")
        factors = body.split("*")
        coeff = Fraction(sign)
        while factors and NUM_RE.match(factors[0]):
            coeff *= Fraction(factors.pop(0))
        if len(factors) != 2:
            raise InstanceError(f"term {t!r} is not a coefficient times a path of length two", ln,
                                _at(s, body.split("*")[0], col))
        for f in factors:
            try:
                quiver.arrow(f)
            except PresentationError:
                raise InstanceError(f"unknown arrow {f!r}", ln, _at(s, f, col)) from None
        a, b = quiver.arrow(factors[0]), quiver.arrow(factors[1])
        if a.target != b.source:
            raise InstanceError(f"arrows {a.name} and {b.name} are not composable", ln, _at(s, body, col))
        rel[(a.name, b.name)] = rel.get((a.name, b.name), Fraction(0)) + coeff
    return {k: v for k, v in rel.items() if v}


def _parse_quiver(sections, hdr):
    vertices = [tok for _, _, tok in _tokens(_need(sections, "vertices"))]
    if len(set(vertices)) != len(vertices):
        raise InstanceError("duplicate vertex")
    arrows = []
    for ln, col, s in _need(sections, "arrows"):
        toks = list(_tokens([(ln, col, s)]))
        if len(toks) != 3:
            raise InstanceError("arrow lines are 'id src dst'", ln, col)
        (_, c0, a), *ends = toks
        if not NAME_RE.match(a):
            raise InstanceError(f"bad arrow id {a!r}", ln, c0)
        for _, c, v in ends:
            if v not in vertices:
                raise InstanceError(f"unknown vertex {v!r}", ln, c)
        arrows.append(Arrow(a, ends[0][2], ends[1][2]))
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except PresentationError as e:
        raise InstanceError(str(e)) from None
    rels = [parse_relation(s, quiver, ln, col) for ln, col, s in sections.get(("relations", ""), [])]
    try:
        pres = QuadraticPresentation.from_relations(quiver, [r for r in rels if r])
    except PresentationError as e:
        raise InstanceError(str(e)) from None
    extra = {}
    if ("order", "") in sections:
        pairs = []
        for ln, col, s in sections[("order", "")]:
            chain = [p.strip() for p in s.split("<")]
            if len(chain) < 2 or any(not p for p in chain):
                raise InstanceError("order lines are 'a < b < ...'", ln, col)
            for v in chain:
                if v not in vertices:
                    raise InstanceError(f"unknown vertex {v!r} in order", ln, _at(s, v, col))
            pairs += list(zip(chain, chain[1:]))
        try:
            extra["order"] = OrderedPresentation.from_pairs(pres, pairs)
        except ValueError as e:
            raise InstanceError(str(e)) from None
    if ("psi", "") in sections:
        extra["psi"] = _rows(sections[("psi", "")])
    return pres, extra


# localization ------------------------------------------------------------------------


def _rows(lines, width=None):
    rows = []
    for ln, col, s in lines:
        row = [_rational(m.group(), ln, col + m.start()) for m in re.finditer(r"\S+", s)]
        if width is not None and len(row) != width:
            raise InstanceError(f"expected {width} entries, got {len(row)}", ln, col)
        rows.append(row)
    return rows


def _names(sections, key):
    return tuple(tok for _, _, tok in _tokens(_need(sections, key)))


def _parse_localization(sections, hdr):
    u, z, index = _names(sections, "u"), _names(sections, "z"), _names(sections, "index")
    incl_rows = _rows(_need(sections, "incl"), len(z))
    if len(incl_rows) != len(u):
        raise InstanceError(f"[incl] needs {len(u)} rows")
    h = {}
    for a in index:
        if ("h", a) not in sections:
            raise InstanceError(f"missing section [h {a}]")
        rows = _rows(sections[("h", a)], len(z))
        if len(rows) != len(u):
            raise InstanceError(f"[h {a}] needs {len(u)} rows")
        h[a] = RationalMatrix.from_rows(rows, len(z))
    for (sec, arg) in sections:
        if sec == "h" and arg not in index:
            raise InstanceError(f"[h {arg}] names an unknown index")
    la = LocalizationAlgebra(index, u, z, RationalMatrix.from_rows(incl_rows, len(z)), h)
    bad = la.check()
    if bad:
        raise InstanceError("; ".join(bad))
    extra = {}
    if ("pairing", "") in sections:
        extra["pairing"] = RationalMatrix.from_rows(_rows(sections[("pairing", "")]))
    if ("bijection", "") in sections:
        bij = {}
        for ln, col, s in sections[("bijection", "")]:
            parts = [p.strip() for p in s.split("->")]
            if len(parts) != 2 or parts[0] not in index:
                raise InstanceError("bijection lines are 'alpha -> beta'", ln, col)
            bij[parts[0]] = parts[1]
        extra["bijection"] = bij
    return la, extra


def certificate(inst: Instance) -> DualityCertificate:
    if "pairing" not in inst.extra or "bijection" not in inst.extra:
        raise InstanceError("localization instance carries no [pairing] and [bijection]")
    return DualityCertificate(inst.extra["pairing"], inst.extra["bijection"])


# arrangement and blocks -------------------------------------------------------------


def _parse_arrangement(sections, hdr):
    space = _rows(_need(sections, "space"))
    eta = _rows(_need(sections, "eta"))
    xi = _rows(_need(sections, "xi"))
    if len(eta) != 1 or len(xi) != 1:
        raise InstanceError("[eta] and [xi] hold a single row")
    n = len(eta[0])
    if len(xi[0]) != n or any(len(r) != n for r in space):
        raise InstanceError(f"all rows must have length {n}")
    return PolarizedArrangement.make(space, eta[0], xi[0], n), {}


def _parse_blocks(sections, hdr):
    def comp(key):
        vals = [int(_rational(t, ln, col)) for ln, col, t in _tokens(_need(sections, key))]
        if any(v < 0 for v in vals):
            raise InstanceError(f"[{key}] entries must be non-negative")
        try:
            origin = int(hdr.get(f"{key}_origin", "1"))
        except ValueError:
            raise InstanceError(f"{key}_origin must be an integer") from None
        return Composition.from_list(vals, origin)

    mu, nu = comp("mu"), comp("nu")
    if "n" in hdr and (int(hdr["n"]) != mu.n or int(hdr["n"]) != nu.n):
        raise InstanceError(f"mu and nu must both sum to n = {hdr['n']}")
    try:
        return BlockPair(mu, nu), {}
    except ValueError as e:
        raise InstanceError(str(e)) from None
