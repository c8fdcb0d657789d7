"""Alcove geometry in rank 1 and 2, and the formal Soergel recursion.

Polynomials in the formal parameter v are stored as ``LaurentPoly`` with
d = 0, whose single variable plays the role of v.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import TruncationTooSmall, WallThroughOrigin
from .ring import LaurentPoly
from .walks import Hyperplane, hyperplane_closure

__all__ = [
    "Alcove",
    "AlcoveComplex",
    "NPoly",
    "build_rank1",
    "build_rank2",
    "wall_pairing",
    "soergel_n",
    "decomposition_prediction",
    "vpoly_str",
    "descending_walls",
    "wall_cross",
    "blob_weights",
    "rank1_orbit",
    "ORIENTATIONS",
]

ORIENTATIONS = ("graded", "printed")

V = LaurentPoly.q(0)
ONE = LaurentPoly(0, 1)
ZERO = LaurentPoly(0)


def vpoly_str(p: LaurentPoly) -> str:
    return str(p).replace("q", "v")


def _at_one(p: LaurentPoly) -> int:
    return sum(p.terms.values())


def _const_term(p: LaurentPoly) -> int:
    return p.terms.get((0,), 0)


@dataclass(frozen=True)
class Alcove:
    """Rank 1: key is the signed index.  Rank 2: key is the image of 0 (last coordinate removed)."""

    key: object
    size: int = field(compare=False)
    label: str = field(compare=False, default="")

    def __str__(self):
        return self.label or str(self.key)


class AlcoveComplex:
    """A truncated alcove complex with its wall-orbit pairings."""

    def __init__(self, rank: int, wall_data, radius: int, alcoves: dict, pairing: Callable,
                 orbits: Sequence[str], contains: Callable | None = None):
        self.rank = rank
        self.wall_data = wall_data
        self.radius = radius
        self._alcoves = alcoves
        self._pairing = pairing
        self.orbits = tuple(orbits)
        self._contains = contains

    @property
    def origin(self) -> Alcove:
        return next(a for a in self._alcoves.values() if a.size == 0)

    def alcoves(self, max_size: int | None = None) -> list[Alcove]:
        out = [a for a in self._alcoves.values() if max_size is None or a.size <= max_size]
        return sorted(out, key=lambda a: (a.size, str(a.key)))

    def __contains__(self, a: Alcove) -> bool:
        return a.key in self._alcoves

    def get(self, key) -> Alcove:
        if key not in self._alcoves:
            raise TruncationTooSmall(f"alcove {key} lies beyond radius {self.radius}")
        return self._alcoves[key]

    def pair(self, b: Alcove, s: str) -> Alcove:
        return self._pairing(b, s)

    def alcove_of_weight(self, weight):
        """Alcove containing a weight, or None when the weight lies on a wall."""
        if self._contains is None:
            raise NotImplementedError
        return self._contains(weight)


# ---------------------------------------------------------------------------
# rank 1


def build_rank1(l: int, m: int, radius: int) -> AlcoveComplex:
    """Reflection points at -m + l Z; alcoves indexed by signed integers from A^0."""
    if l < 2:
        raise ValueError("l must be at least 2")
    if m % l == 0:
        raise WallThroughOrigin(f"m = {m} puts a wall at the origin for l = {l}")
    a0 = (-m) % l - l
    alcoves = {k: Alcove(k, abs(k), f"({a0 + k * l},{a0 + (k + 1) * l})") for k in range(-radius, radius + 1)}

    def pairing(b: Alcove, s: str) -> Alcove:
        k = b.key
        if s == "s":
            nk = k + 1 if k % 2 == 0 else k - 1
        elif s == "t":
            nk = k - 1 if k % 2 == 0 else k + 1
        else:
            raise ValueError(f"unknown wall orbit {s!r}")
        if nk not in alcoves:
            raise TruncationTooSmall(f"alcove {nk} lies beyond radius {radius}")
        return alcoves[nk]

    def contains(weight: int):
        if (weight - a0) % l == 0:
            return None
        k = (weight - a0) // l
        if k not in alcoves:
            raise TruncationTooSmall(f"weight {weight} lies beyond radius {radius}")
        return alcoves[k]

    cx = AlcoveComplex(1, {"l": l, "m": m, "a0": a0}, radius, alcoves, pairing, ("s", "t"), contains)
    return cx


def rank1_orbit(weight: int, l: int, m: int, lo: int, hi: int) -> list[int]:
    """Affine Weyl orbit of a weight under reflections in the points -m + l Z, within [lo, hi]."""
    out = set()
    for base in (weight, -2 * m - weight):
        r = (base - lo) % (2 * l)
        out.update(range(lo + r, hi + 1, 2 * l))
    return sorted(out)


# ---------------------------------------------------------------------------
# rank 2


class _Affine:
    """p -> P with P[k] = p[perm[k]] + t[k]."""

    __slots__ = ("perm", "t")

    def __init__(self, perm, t):
        self.perm = tuple(perm)
        self.t = tuple(t)

    @classmethod
    def identity(cls, d):
        return cls(range(d), (0,) * d)

    @classmethod
    def reflection(cls, h: Hyperplane, d: int):
        perm = list(range(d))
        perm[h.i - 1], perm[h.j - 1] = h.j - 1, h.i - 1
        t = [0] * d
        t[h.i - 1], t[h.j - 1] = h.x, -h.x
        return cls(perm, t)

    def __call__(self, p):
        return tuple(p[self.perm[k]] + self.t[k] for k in range(len(p)))

    def then_after(self, r: "_Affine") -> "_Affine":
        """self o r."""
        d = len(self.perm)
        perm = [r.perm[self.perm[k]] for k in range(d)]
        t = [r.t[self.perm[k]] + self.t[k] for k in range(d)]
        return _Affine(perm, t)


@dataclass(frozen=True)
class _Families:
    """Hyperplanes grouped by direction: residues mod period, or a finite x-set."""

    period: int
    sets: dict

    def xs_between(self, pair, y) -> int:
        xs = self.sets.get(pair, ())
        lo, hi = (y, 0) if y < 0 else (0, y)
        if self.period:
            return sum(_count_open(lo, hi, r, self.period) for r in xs)
        return sum(1 for x in xs if lo < x < hi)

    def nearest(self, pair):
        xs = self.sets.get(pair, ())
        if self.period:
            out = []
            for r in xs:
                pos = r % self.period or self.period
                out += [pos, pos - self.period]
            return out
        pos = [x for x in xs if x > 0]
        neg = [x for x in xs if x < 0]
        return ([min(pos)] if pos else []) + ([max(neg)] if neg else [])


def _coords(h: Hyperplane):
    """Hyperplane as a*u + b*v = x in coordinates u = p1 - p3, v = p2 - p3."""
    vec = [0, 0, 0]
    vec[h.i - 1] += 1
    vec[h.j - 1] -= 1
    return vec[0], vec[1], h.x


def _side(h: Hyperplane, pt) -> int:
    a, b, x = _coords(h)
    val = a * pt[0] + b * pt[1] - x
    return (val > 0) - (val < 0)


def _is_wall(h: Hyperplane, others: Sequence[Hyperplane]) -> bool:
    a, b, x = _coords(h)
    if b != 0:
        p0 = (Fraction(0), Fraction(x, b))
    else:
        p0 = (Fraction(x, a), Fraction(0))
    direction = (Fraction(-b), Fraction(a))
    lo, hi = None, None
    for g in others:
        ga, gb, gx = _coords(g)
        want = _side(g, (0, 0))
        c0 = ga * p0[0] + gb * p0[1] - gx
        c1 = ga * direction[0] + gb * direction[1]
        if c1 == 0:
            if (c0 > 0) - (c0 < 0) != want:
                return False
            continue
        root = -c0 / c1
        # want * (c0 + c1 t) > 0
        if (c1 > 0) == (want > 0):
            lo = root if lo is None else max(lo, root)
        else:
            hi = root if hi is None else min(hi, root)
    return lo is None or hi is None or lo < hi


def build_rank2(factors: Iterable[Hyperplane], l: int, radius: int, d: int = 3) -> AlcoveComplex:
    """Alcove complex of the group generated by the given hyperplanes in the A_2 plane.

    ``l`` is the period of the hyperplane families (0 for the finite group).
    """
    if d != 3:
        raise ValueError("rank-2 geometry needs d = 3")
    gens = [h.normalized() for h in factors]
    if any(h.x == 0 for h in gens):
        raise WallThroughOrigin("a generating hyperplane passes through the origin")
    if l:
        seeds = set(gens)
        for h in gens:
            seeds.update({Hyperplane(h.i, h.j, h.x + l), Hyperplane(h.i, h.j, h.x - l)})
        closure = hyperplane_closure(seeds, d, 4 * l + max([abs(h.x) for h in gens] + [0]))
        sets = {}
        for h in closure:
            sets.setdefault((h.i, h.j), set()).add(h.x % l)
    else:
        bound = 2 * sum(abs(h.x) for h in gens) + 1
        closure = hyperplane_closure(gens, d, bound)
        sets = {}
        for h in closure:
            sets.setdefault((h.i, h.j), set()).add(h.x)
    for pair, xs in sets.items():
        if (0 in xs):
            raise WallThroughOrigin(f"the group contains a hyperplane through 0 in direction {pair}")
    fam = _Families(l, {k: tuple(sorted(v)) for k, v in sets.items()})

    cands = [Hyperplane(i, j, x) for (i, j) in fam.sets for x in fam.nearest((i, j))]
    walls = [h for h in cands if _is_wall(h, [g for g in cands if g != h])]
    walls.sort(key=lambda h: (h.i, h.j, h.x))
    names = [f"s{k}" for k in range(len(walls))]
    refl = {n: _Affine.reflection(h, d) for n, h in zip(names, walls)}

    def key_of(p):
        return tuple(v - p[-1] for v in p[:-1])

    def size_of(p):
        return sum(fam.xs_between((i, j), p[i - 1] - p[j - 1]) for (i, j) in fam.sets)

    origin = (0,) * d
    ident = _Affine.identity(d)
    elems = {key_of(origin): (ident, "")}
    alcoves = {key_of(origin): Alcove(key_of(origin), 0, "e")}
    queue = deque([key_of(origin)])
    while queue:
        k = queue.popleft()
        w, word = elems[k]
        for n in names:
            nw = w.then_after(refl[n])
            p = nw(origin)
            nk = key_of(p)
            if nk in elems:
                continue
            sz = size_of(p)
            if sz > radius:
                continue
            elems[nk] = (nw, word + n)
            alcoves[nk] = Alcove(nk, sz, word + n)
            queue.append(nk)

    def pairing(b: Alcove, s: str) -> Alcove:
        w, _ = elems[b.key]
        p = w.then_after(refl[s])(origin)
        nk = key_of(p)
        if nk not in alcoves:
            raise TruncationTooSmall(f"alcove {nk} lies beyond radius {radius}")
        return alcoves[nk]

    def contains(weight):
        p = tuple(weight) + (0,) * (d - len(weight))
        for (i, j), xs in fam.sets.items():
            y = p[i - 1] - p[j - 1]
            if (l and y % l in xs) or (not l and y in xs):
                return None
        # find the alcove by walking: compare side vectors with all enumerated alcoves
        for k, (w, _) in elems.items():
            c = w(origin)
            if all(_same_side(p, c, (i, j), fam) for (i, j) in fam.sets):
                return alcoves[k]
        raise TruncationTooSmall(f"weight {weight} lies beyond radius {radius}")

    wall_data = {"period": l, "families": fam.sets, "walls": walls}
    return AlcoveComplex(2, wall_data, radius, alcoves, pairing, names, contains)


def _same_side(p, c, pair, fam: _Families) -> bool:
    i, j = pair
    y1, y2 = p[i - 1] - p[j - 1], c[i - 1] - c[j - 1]
    lo, hi = min(y1, y2), max(y1, y2)
    xs = fam.sets[pair]
    if fam.period:
        return not any(_count_open(lo, hi, r, fam.period) for r in xs)
    return not any(lo < x < hi for x in xs)


def _count_open(lo: int, hi: int, r: int, period: int) -> int:
    """Integers congruent to r mod period in the open interval (lo, hi)."""
    if hi - lo < 2:
        return 0
    first = lo + 1 + ((r - lo - 1) % period)
    return 0 if first >= hi else (hi - 1 - first) // period + 1


def wall_pairing(b: Alcove, s: str, complex: AlcoveComplex) -> Alcove:
    return complex.pair(b, s)


# ---------------------------------------------------------------------------
# Soergel recursion


@dataclass
class NPoly:
    base: Alcove
    values: dict = field(default_factory=dict)

    def __getitem__(self, b: Alcove) -> LaurentPoly:
        return self.values.get(b, ZERO)

    def at_one(self) -> dict:
        return {b: _at_one(p) for b, p in self.values.items()}

    def support(self) -> list[Alcove]:
        return sorted(self.values, key=lambda a: (a.size, str(a.key)))


class _Soergel:
    def __init__(self, cx: AlcoveComplex, orientation: str):
        if orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        self.cx = cx
        self.orientation = orientation
        self.memo: dict = {}

    def wall_cross(self, n: NPoly, s: str) -> dict:
        """n' for the alcove n.base.s, computed from n over every s-pair."""
        out: dict = {}
        pairs = set()
        for b in n.values:
            c = self.cx.pair(b, s)
            pairs.add(frozenset((b, c)))
        for pr in pairs:
            lo, hi = sorted(pr, key=lambda a: a.size)
            nlo, nhi = n[lo], n[hi]
            vinv = LaurentPoly.q(0, -1)
            upper = nlo + vinv * nhi
            if self.orientation == "graded":
                lower = nhi + V * nlo
            else:
                lower = vinv * nhi + nlo
            if upper:
                out[hi] = upper
            if lower:
                out[lo] = lower
        return out

    def step(self, a: Alcove, s: str) -> NPoly:
        n_a = self.n(a)
        target = self.cx.pair(a, s)
        prime = self.wall_cross(n_a, s)
        result = dict(prime)
        for b, val in prime.items():
            if b == target or b.size >= target.size:
                continue
            c0 = _const_term(val)
            if c0:
                for c, nb in self.n(b).values.items():
                    result[c] = result.get(c, ZERO) - nb * c0
        return NPoly(target, {b: p for b, p in result.items() if p})

    def n(self, a: Alcove, via: str | None = None) -> NPoly:
        if via is None and a in self.memo:
            return self.memo[a]
        if a.size == 0:
            res = NPoly(a, {a: ONE})
        else:
            downs = [s for s in self.cx.orbits if self.cx.pair(a, s).size < a.size]
            s = via if via is not None else downs[0]
            if s not in downs:
                raise ValueError(f"{s} is not a descending wall of {a}")
            res = self.step(self.cx.pair(a, s), s)
        if via is None:
            self.memo[a] = res
        return res


_ENGINES: dict = {}


def _engine(cx: AlcoveComplex, orientation: str) -> _Soergel:
    key = (id(cx), orientation)
    if key not in _ENGINES:
        _ENGINES[key] = _Soergel(cx, orientation)
    return _ENGINES[key]


def soergel_n(cx: AlcoveComplex, a: Alcove, orientation: str = "graded", via: str | None = None) -> NPoly:
    """n_A by induction on |A|.

    ``via`` forces the final step through a given descending wall, which
    is how the well-definedness check compares the two routes.
    """
    if a.size > cx.radius - 1:
        raise TruncationTooSmall(f"|A| = {a.size} needs radius at least {a.size + 1}")
    return _engine(cx, orientation).n(a, via)


def descending_walls(cx: AlcoveComplex, a: Alcove) -> list[str]:
    return [s for s in cx.orbits if cx.pair(a, s).size < a.size]


def wall_cross(cx: AlcoveComplex, n: NPoly, s: str, orientation: str = "graded") -> dict:
    return _engine(cx, orientation).wall_cross(n, s)


def blob_weights(n: int) -> list[int]:
    return list(range(-n, n + 1, 2))


def decomposition_prediction(n: int, l: int, m: int, orientation: str = "graded"):
    """[Delta(mu) : L(lambda)] for regular b_n weights, from n_A(B) at v = 1.

    Returns ``(weights, matrix, layers)``: rows are mu, columns lambda, and
    ``layers[mu][lambda]`` lists the v-exponents present in n_A(B).
    """
    weights = blob_weights(n)
    radius = (n + abs(m)) // l + 3
    cx = build_rank1(l, m, radius)
    regular = [w for w in weights if cx.alcove_of_weight(w) is not None]
    mat = {mu: {lam: 0 for lam in regular} for mu in regular}
    layers = {mu: {lam: () for lam in regular} for mu in regular}
    for lam in regular:
        a = cx.alcove_of_weight(lam)
        na = soergel_n(cx, a, orientation)
        orbit = set(rank1_orbit(lam, l, m, -n, n))
        for mu in regular:
            if mu not in orbit:
                continue
            p = na[cx.alcove_of_weight(mu)]
            mat[mu][lam] = _at_one(p)
            layers[mu][lam] = tuple(sorted(e[0] for e in p.terms))
    return regular, mat, layers
