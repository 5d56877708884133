"""Exact LP by Fourier-Motzkin elimination.

Constraints are pairs (a, b) meaning a . t <= b, with rational entries.
Only meant for the handful of variables a polarized arrangement needs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Constraint = tuple  # (coeff tuple, rhs)


def _normalize(a: Sequence[Fraction], b: Fraction) -> Constraint:
    for x in a:
        if x:
            s = abs(x)
            return tuple(y / s for y in a), b / s
    return tuple(a), b


def eliminate(cons: list[Constraint], j: int) -> list[Constraint] | None:
    """Project out variable j; None if a contradiction 0 <= negative appears."""
    pos, neg, keep = [], [], []
    for a, b in cons:
        (pos if a[j] > 0 else neg if a[j] < 0 else keep).append((a, b))
    out = set()
    for a, b in keep:
        out.add(_normalize(a, b))
    for ap, bp in pos:
        for an, bn in neg:
            lp, ln = -an[j], ap[j]
            a = tuple(lp * x + ln * y for x, y in zip(ap, an))
            out.add(_normalize(a, lp * bp + ln * bn))
    res = []
    for a, b in sorted(out):
        if not any(a):
            if b < 0:
                return None
            continue
        res.append((a, b))
    return res


def feasible(cons: Sequence[Constraint], nvars: int) -> bool:
    cur = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in cons]
    for a, b in cur:
        if not any(a) and b < 0:
            return False
    for j in range(nvars):
        cur = eliminate(cur, j)
        if cur is None:
            return False
    return True


def maximize(cons: Sequence[Constraint], c: Sequence, nvars: int):
    """Return ('infeasible', None), ('unbounded', None) or ('optimal', value)."""
    # variable 0 is s with s - c.t <= 0
    ext = [((Fraction(0),) + tuple(Fraction(x) for x in a), Fraction(b)) for a, b in cons]
    ext.append(((Fraction(1),) + tuple(-Fraction(x) for x in c), Fraction(0)))
    if any(not any(a) and b < 0 for a, b in ext):
        return "infeasible", None
    cur = ext
    for j in range(1, nvars + 1):
        cur = eliminate(cur, j)
        if cur is None:
            return "infeasible", None
    ups = [b / a[0] for a, b in cur if a[0] > 0]
    lows = [b / a[0] for a, b in cur if a[0] < 0]
    if ups and lows and max(lows) > min(ups):
        return "infeasible", None
    if not ups:
        return "unbounded", None
    return "optimal", min(ups)
