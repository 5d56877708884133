"""Index combinatorics for parabolic category O blocks of gl_n.

Permutations are tuples with ``w[i] = w(i)`` on {0..n-1}; they act on
vectors by moving entry i to position w(i).  A coset wW_nu is represented
by the vector w.alpha_nu.  Positions are 0-based internally and 1-based
in every report.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import rank

DEFAULT_BOUND = 8
BRUTE_BOUND = 6


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class Composition:
    """Finitely supported sequence of non-negative integers indexed by Z."""

    parts: tuple  # sorted ((index, value), ...) with value > 0

    @classmethod
    def from_list(cls, values: Sequence[int], origin: int = 1) -> "Composition":
        items = []
        for k, v in enumerate(values):
            v = int(v)
            if v < 0:
                raise ValueError("composition entries must be non-negative")
            if v:
                items.append((origin + k, v))
        return cls(tuple(items))

    @classmethod
    def from_dict(cls, d: dict) -> "Composition":
        return cls(tuple(sorted((int(i), int(v)) for i, v in d.items() if v)))

    def __getitem__(self, i: int) -> int:
        return dict(self.parts).get(i, 0)

    @property
    def n(self) -> int:
        return sum(v for _, v in self.parts)

    def nonzero(self) -> list[int]:
        return [v for _, v in self.parts]

    def transpose(self) -> "Composition":
        top = max(self.nonzero(), default=0)
        return Composition.from_list([sum(1 for v in self.nonzero() if v >= j) for j in range(1, top + 1)])

    def plus(self) -> "Composition":
        return Composition.from_list(sorted(self.nonzero(), reverse=True))

    def reverse(self) -> "Composition":
        return Composition.from_dict({-i: v for i, v in self.parts})

    def bar(self) -> "Composition":
        return Composition.from_list(self.nonzero())

    def as_list(self) -> list[int]:
        """Entries from the first to the last nonzero index."""
        if not self.parts:
            return []
        lo, hi = self.parts[0][0], self.parts[-1][0]
        return [self[i] for i in range(lo, hi + 1)]

    @property
    def origin(self) -> int:
        return self.parts[0][0] if self.parts else 1

    def __str__(self) -> str:
        return f"{tuple(self.as_list())}@{self.origin}"


def composition_calculus(nu: Composition) -> dict:
    return {"transpose": nu.transpose(), "plus": nu.plus(), "reverse": nu.reverse(), "bar": nu.bar()}


def dominated(a: Composition, b: Composition) -> bool:
    """a <= b in dominance order on the partitions a^+ and b^+."""
    pa, pb = a.plus().nonzero(), b.plus().nonzero()
    if sum(pa) != sum(pb):
        return False
    m = max(len(pa), len(pb))
    pa += [0] * (m - len(pa))
    pb += [0] * (m - len(pb))
    sa = sb = 0
    for x, y in zip(pa, pb):
        sa, sb = sa + x, sb + y
        if sa > sb:
            return False
    return True


def _intervals(c: Composition) -> list[tuple]:
    out, s = [], 0
    for v in c.nonzero():
        out.append(tuple(range(s, s + v)))
        s += v
    return out


@dataclass(frozen=True)
class BlockPair:
    mu: Composition
    nu: Composition

    def __post_init__(self):
        if self.mu.n != self.nu.n:
            raise ValueError(f"mu and nu have different totals {self.mu.n} and {self.nu.n}")

    @property
    def n(self) -> int:
        return self.nu.n

    @property
    def lam(self) -> Composition:
        return self.nu.transpose()

    @property
    def alpha(self) -> tuple:
        """Weakly decreasing weight with nu_i entries equal to -i."""
        return tuple(-i for i, v in self.nu.parts for _ in range(v))

    @property
    def mu_blocks(self) -> list[tuple]:
        return _intervals(self.mu)

    @property
    def nu_blocks(self) -> list[tuple]:
        return _intervals(self.nu)

    def dual(self) -> "BlockPair":
        return BlockPair(self.nu, self.mu.reverse())

    def __str__(self) -> str:
        return f"mu={self.mu} nu={self.nu}"


def _check(n: int, bound: int):
    if n > bound:
        raise CapacityError(f"n = {n} exceeds the configured bound {bound}")


def act(w: Sequence[int], x: Sequence) -> tuple:
    y = [None] * len(x)
    for i, v in enumerate(x):
        y[w[i]] = v
    return tuple(y)


def inverse(w: Sequence[int]) -> tuple:
    r = [0] * len(w)
    for i, v in enumerate(w):
        r[v] = i
    return tuple(r)


def compose(u: Sequence[int], v: Sequence[int]) -> tuple:
    """(u v)(i) = u(v(i))."""
    return tuple(u[v[i]] for i in range(len(v)))


def length(w: Sequence[int]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


def multiset_permutations(values: Sequence) -> Iterable[tuple]:
    """Distinct rearrangements, in lexicographic order."""
    cnt = Counter(values)
    keys = sorted(cnt)
    n = len(values)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if cnt[k]:
                cnt[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                cnt[k] += 1

    yield from rec([])


def in_lambda_plus(x: Sequence, blocks: Sequence[tuple]) -> bool:
    return all(x[b[r]] > x[b[r + 1]] for b in blocks for r in range(len(b) - 1))


def index_set(bp: BlockPair, bound: int = DEFAULT_BOUND) -> list[tuple]:
    """I^mu_nu as the vectors w.alpha_nu strictly decreasing on each mu-block."""
    _check(bp.n, bound)
    blocks = bp.mu_blocks
    return [x for x in multiset_permutations(bp.alpha) if in_lambda_plus(x, blocks)]


def block_group(blocks: Sequence[tuple], n: int) -> list[tuple]:
    """Permutations preserving each block as a set."""
    out = []
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        w = list(range(n))
        for b, img in zip(blocks, parts):
            for i, j in zip(b, img):
                w[i] = j
        out.append(tuple(w))
    return out


def double_coset_audit(bp: BlockPair, bound: int = BRUTE_BOUND) -> dict:
    """Full-size double cosets in W_mu \\ W / W_nu against I^mu_nu."""
    n = bp.n
    _check(n, bound)
    Wm, Wn = block_group(bp.mu_blocks, n), block_group(bp.nu_blocks, n)
    full = len(Wm) * len(Wn)
    which: dict[tuple, int] = {}
    sizes = []
    for w in itertools.permutations(range(n)):
        if w in which:
            continue
        dc = {compose(compose(u, w), s) for u in Wm for s in Wn}
        for x in dc:
            which[x] = len(sizes)
        sizes.append(len(dc))
    full_ids = {k for k, s in enumerate(sizes) if s == full}
    I = index_set(bp)
    reps = {}
    for w in itertools.permutations(range(n)):
        x = act(w, bp.alpha)
        reps.setdefault(x, w)
    images = [which[reps[x]] for x in I]
    injective = len(set(images)) == len(images)
    onto = set(images) == full_ids
    return {
        "bound": bound,
        "double_cosets": len(sizes),
        "full_size": len(full_ids),
        "index_size": len(I),
        "injective": injective,
        "onto_full_size": onto,
        "passed": injective and onto and len(full_ids) == len(I),
    }


def jay_torus(bp: BlockPair) -> dict:
    """The sets J and dim t^mu_nu = #mu-blocks - dim Span{1_J}."""
    lam = bp.lam.nonzero()
    blocks = bp.mu_blocks
    J = []
    for k in range(1, len(blocks) + 1):
        need = sum(lam[:k])
        for chosen in itertools.combinations(blocks, k):
            s = tuple(sorted(i for b in chosen for i in b))
            if len(s) == need:
                J.append(s)
    J.sort(key=lambda s: (len(s), s))
    span = rank([[int(i in s) for i in range(bp.n)] for s in J], bp.n) if J else 0
    return {"J": [tuple(i + 1 for i in s) for s in J], "span_dim": span, "dim": len(blocks) - span}


def single_orbit_audit(bp: BlockPair, bound: int = BRUTE_BOUND) -> dict:
    """For each J, the multiset of entries of w.alpha_nu on J is the same for all w in I."""
    _check(bp.n, bound)
    I = index_set(bp)
    jt = jay_torus(bp)
    nu = dict(bp.nu.parts)
    per_J = {}
    ok = True
    for J1 in jt["J"]:
        J = [j - 1 for j in J1]
        k = sum(1 for b in bp.mu_blocks if b[0] in J)
        ms = {tuple(sorted(Counter(x[j] for j in J).items())) for x in I}
        predicted = tuple(sorted((-i, min(v, k)) for i, v in nu.items() if min(v, k)))
        good = len(ms) <= 1 and all(m == predicted for m in ms)
        per_J[J1] = good
        ok = ok and good
    return {"bound": bound, "per_J": per_J, "index_size": len(I), "passed": ok}


def longest_representative(x: Sequence[int], bp: BlockPair) -> tuple:
    """Longest w with w.alpha_nu = x: w is decreasing on every nu-block."""
    n = bp.n
    w = [0] * n
    for (i, _), blk in zip(bp.nu.parts, bp.nu_blocks):
        targets = sorted((j for j in range(n) if x[j] == -i), reverse=True)
        for pos, t in zip(blk, targets):
            w[pos] = t
    return tuple(w)


def dual_bijection(bp: BlockPair, bound: int = DEFAULT_BOUND) -> dict:
    """wW_nu -> w^{-1} w_0 W_{mu^o} with w longest in its coset and w_0 longest in S_n."""
    n = bp.n
    _check(n, bound)
    d = bp.dual()
    w0 = tuple(range(n - 1, -1, -1))
    src = index_set(bp, bound)
    tgt = set(index_set(d, bound))
    mapping = {}
    for x in src:
        w = longest_representative(x, bp)
        mapping[x] = act(compose(inverse(w), w0), d.alpha)
    imgs = list(mapping.values())
    injective = len(set(imgs)) == len(imgs)
    onto = set(imgs) == tgt
    return {"map": mapping, "injective": injective, "onto": onto, "passed": injective and onto,
            "source_size": len(src), "target_size": len(tgt)}


def twist(x: Sequence[int]) -> tuple:
    """I^{mu^o}_{nu^o} -> I^mu_nu induced by conjugation with w_0."""
    return tuple(-v for v in reversed(x))


def involution_check(bp: BlockPair, bound: int = DEFAULT_BOUND) -> bool:
    first = dual_bijection(bp, bound)["map"]
    second = dual_bijection(bp.dual(), bound)["map"]
    return all(twist(second[first[x]]) == x for x in first)


def fixed_point_index_set(bp: BlockPair, nilpotent: str = "lower", bound: int = DEFAULT_BOUND) -> list[tuple]:
    """Cosets whose coordinate flag F(w) satisfies N F_i inside F_{i-1}.

    ``nilpotent="lower"`` uses N(e_{i+1}) = e_i within a mu-block, the
    convention under which the fixed points are indexed by I^mu_nu;
    ``"upper"`` uses N(e_i) = e_{i+1}.
    """
    n = bp.n
    _check(n, bound)
    edges = []
    for b in bp.mu_blocks:
        for r in range(len(b) - 1):
            edges.append((b[r + 1], b[r]) if nilpotent == "lower" else (b[r], b[r + 1]))
    sizes = bp.nu.bar().nonzero()
    seen = {}
    for w in itertools.permutations(range(n)):
        step = {}
        s = 0
        for i, sz in enumerate(sizes, start=1):
            for j in range(s, s + sz):
                step[w[j]] = i
            s += sz
        key = tuple(step[j] for j in range(n))
        if key in seen:
            continue
        # e_src enters at step[src]; its image e_dst must already lie in the previous step
        seen[key] = all(step[dst] < step[src] for src, dst in edges)
    out = []
    levels = [i for i, _ in bp.nu.parts]
    for key, good in seen.items():
        if good:
            out.append(tuple(-levels[k - 1] for k in key))
    return sorted(out)


def all_compositions(n: int) -> list[Composition]:
    """Compositions of n with positive parts starting at index 1."""
    out = []
    for cuts in itertools.product((0, 1), repeat=max(n - 1, 0)):
        parts, cur = [], 1
        for c in cuts:
            if c:
                parts.append(cur)
                cur = 1
            else:
                cur += 1
        parts.append(cur)
        out.append(Composition.from_list(parts))
    return out


def all_pairs(n: int) -> list[BlockPair]:
    cs = all_compositions(n)
    return [BlockPair(m, v) for m in cs for v in cs]


def exhaustive_audit(max_n: int = 5, dual_max_n: int = 4) -> dict:
    """Index set vs double cosets for n <= max_n; orbit and bijection audits for n <= dual_max_n."""
    rows = []
    ok = True
    for n in range(1, max_n + 1):
        for bp in all_pairs(n):
            dc = double_coset_audit(bp)
            row = {"pair": str(bp), "index_size": dc["index_size"], "double_coset": dc["passed"],
                   "nonempty_iff_dominance": (dc["index_size"] > 0) == dominated(bp.mu, bp.lam)}
            good = dc["passed"] and row["nonempty_iff_dominance"]
            if n <= dual_max_n:
                row["single_orbit"] = single_orbit_audit(bp)["passed"]
                row["dual_bijection"] = dual_bijection(bp)["passed"]
                row["fixed_points"] = fixed_point_index_set(bp) == sorted(index_set(bp))
                good = good and row["single_orbit"] and row["dual_bijection"] and row["fixed_points"]
            row["passed"] = good
            ok = ok and good
            rows.append(row)
    return {"max_n": max_n, "dual_max_n": dual_max_n, "pairs": len(rows), "rows": rows, "passed": ok}
