"""Multipartitions, walks on Z^d, eigenvalue sequences and walk reflections."""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from math import factorial
from typing import Iterable, Iterator, Sequence

from .errors import DegreeMismatch, NotOneRow, NotTouching
from .ring import LaurentPoly, Specialization, specialize

__all__ = [
    "Multipartition",
    "Walk",
    "Hyperplane",
    "EigenvalueSeq",
    "partitions",
    "multipartitions",
    "one_row_weights",
    "restrict",
    "standard_walks",
    "lambda_of_walk",
    "touches",
    "effective_touches",
    "reflect_walk",
    "hyperplane_closure",
    "walk_orbit",
    "walk_orbit_by_folding",
    "orbit_size_formula",
    "point_orbit",
    "project_weight",
    "dominance",
    "sorted_walk",
    "is_sorted",
    "is_direct",
    "direct_walks",
    "change_points",
    "multinomial",
]


def multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


# ---------------------------------------------------------------------------
# partitions


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of n in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class Multipartition:
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        comps = tuple(tuple(int(p) for p in c if p) for c in self.components)
        for c in comps:
            if any(a < b for a, b in zip(c, c[1:])) or any(p < 0 for p in c):
                raise ValueError(f"component {c} is not a partition")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return sum(sum(c) for c in self.components)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(c) for c in self.components)

    @property
    def is_one_row(self) -> bool:
        return all(len(c) <= 1 for c in self.components)

    @classmethod
    def one_row(cls, degrees: Sequence[int]) -> "Multipartition":
        return cls(tuple((k,) if k else () for k in degrees))

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "Multipartition":
        """Read forms like ``((2),(1))``, ``(,(1^2))`` or ``((2),0)``."""
        s = text.replace(" ", "")
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"cannot parse multipartition {text!r}")
        body = s[1:-1]
        pieces, depth, cur = [], 0, ""
        for ch in body:
            if ch == "," and depth == 0:
                pieces.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        pieces.append(cur)
        comps = []
        for p in pieces:
            if p in ("", "0", "()"):
                comps.append(())
                continue
            if not (p.startswith("(") and p.endswith(")")):
                raise ValueError(f"bad component {p!r}")
            parts = []
            for tok in p[1:-1].split(","):
                m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
                if not m:
                    raise ValueError(f"bad part {tok!r}")
                parts += [int(m.group(1))] * int(m.group(2) or 1)
            comps.append(tuple(sorted(parts, reverse=True)))
        if d is not None:
            if len(comps) > d:
                raise ValueError("too many components")
            comps += [()] * (d - len(comps))
        return cls(tuple(comps))

    def __str__(self):
        def comp(c):
            if not c:
                return "()"
            runs, out = Counter(c), []
            for p in sorted(runs, reverse=True):
                out.append(f"{p}^{runs[p]}" if runs[p] > 1 else str(p))
            return "(" + ",".join(out) + ")"

        return "(" + ",".join(comp(c) for c in self.components) + ")"


def multipartitions(n: int, d: int) -> list[Multipartition]:
    def rec(n, d):
        if d == 1:
            for p in partitions(n):
                yield (p,)
            return
        for k in range(n, -1, -1):
            for p in partitions(k):
                for rest in rec(n - k, d - 1):
                    yield (p,) + rest

    return [Multipartition(c) for c in rec(n, d)]


def one_row_weights(n: int, d: int) -> list[Multipartition]:
    """Lambda^D(n): one-row multipartitions, i.e. compositions of n into d parts."""

    def comps(n, d):
        if d == 1:
            yield (n,)
            return
        for k in range(n, -1, -1):
            for rest in comps(n - k, d - 1):
                yield (k,) + rest

    return [Multipartition.one_row(c) for c in comps(n, d)]


def restrict(mu: Multipartition) -> list[Multipartition]:
    """All one-box removals, ordered by component then row."""
    out = []
    for ci, c in enumerate(mu.components):
        for r, part in enumerate(c):
            nxt = c[r + 1] if r + 1 < len(c) else 0
            if part > nxt:
                new = list(c)
                new[r] -= 1
                comps = list(mu.components)
                comps[ci] = tuple(new)
                out.append(Multipartition(tuple(comps)))
    return out


# ---------------------------------------------------------------------------
# walks


@dataclass(frozen=True, order=True)
class Walk:
    word: tuple[int, ...]

    def __post_init__(self):
        w = self.word
        if isinstance(w, str):
            w = tuple(int(ch) for ch in w)
        w = tuple(int(x) for x in w)
        if any(x < 1 for x in w):
            raise ValueError("walk letters start at 1")
        object.__setattr__(self, "word", w)

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return "".join(str(x) for x in self.word)

    def counts(self, l: int, d: int) -> tuple[int, ...]:
        """The point reached after l steps."""
        c = [0] * d
        for x in self.word[:l]:
            c[x - 1] += 1
        return tuple(c)

    def points(self, d: int) -> list[tuple[int, ...]]:
        c = [0] * d
        out = [tuple(c)]
        for x in self.word:
            c[x - 1] += 1
            out.append(tuple(c))
        return out

    def endpoint(self, d: int) -> tuple[int, ...]:
        return self.counts(len(self.word), d)


def _as_walk(w) -> Walk:
    return w if isinstance(w, Walk) else Walk(w)


def standard_walks(mu: Multipartition, one_row: bool = True) -> list[Walk]:
    """Walks labelling a basis of the standard module at mu.

    With ``one_row`` the input must be one-row and the result is the set of
    words with letter counts given by mu.  Without it, general mu is allowed
    and each standard multitableau contributes its component word (repeats
    are possible, since the word forgets rows).
    """
    if one_row:
        if not mu.is_one_row:
            raise NotOneRow(f"{mu} has a component with more than one row")
        letters = [k + 1 for k, m in enumerate(mu.degrees) for _ in range(m)]
        return sorted(Walk(p) for p in set(permutations(letters)))
    out = []

    def rec(nu: Multipartition, suffix: tuple[int, ...]):
        if nu.degree == 0:
            out.append(Walk(suffix))
            return
        for ci, c in enumerate(nu.components):
            for r, part in enumerate(c):
                nxt = c[r + 1] if r + 1 < len(c) else 0
                if part > nxt:
                    comps = list(nu.components)
                    new = list(c)
                    new[r] -= 1
                    comps[ci] = tuple(new)
                    rec(Multipartition(tuple(comps)), (ci + 1,) + suffix)

    rec(mu, ())
    return sorted(out)


# ---------------------------------------------------------------------------
# eigenvalue sequences


@dataclass(frozen=True)
class EigenvalueSeq:
    """Entry t is (k, e) standing for lambda_k q^e."""

    entries: tuple[tuple[int, int], ...]

    def as_laurent(self, d: int) -> list[LaurentPoly]:
        return [LaurentPoly.lam(k, d) * LaurentPoly.q(d, e) for k, e in self.entries]

    def specialize(self, k: Specialization):
        return [specialize(x, k) for x in self.as_laurent(k.d)]

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        def one(k, e):
            if e == 0:
                return f"l{k}"
            return f"q^{e}*l{k}" if e != 1 else f"q*l{k}"

        return "(" + ", ".join(one(k, e) for k, e in self.entries) + ")"


def lambda_of_walk(w) -> EigenvalueSeq:
    w = _as_walk(w)
    seen: Counter = Counter()
    out = []
    for x in w.word:
        seen[x] += 1
        out.append((x, 2 * (seen[x] - 1)))
    return EigenvalueSeq(tuple(out))


# ---------------------------------------------------------------------------
# hyperplanes


@dataclass(frozen=True)
class Hyperplane:
    """The hyperplane p_i - p_j = x; its factor is l_i - q^{-2x} l_j."""

    i: int
    j: int
    x: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a hyperplane needs i != j")

    def normalized(self) -> "Hyperplane":
        return self if self.i < self.j else Hyperplane(self.j, self.i, -self.x)

    def __eq__(self, other):
        if not isinstance(other, Hyperplane):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return (a.i, a.j, a.x) == (b.i, b.j, b.x)

    def __hash__(self):
        a = self.normalized()
        return hash((a.i, a.j, a.x))

    def __str__(self):
        return f"({self.i},{self.j};{self.x})"

    @classmethod
    def from_bracket_label(cls, i: int, j: int, x: int) -> "Hyperplane":
        """Translate a label whose factor is written l_i - q^{2x} l_j."""
        return cls(i, j, -x)

    def factor(self, d: int) -> LaurentPoly:
        return LaurentPoly.lam(self.i, d) - LaurentPoly.q(d, -2 * self.x) * LaurentPoly.lam(self.j, d)

    def compose(self, other: "Hyperplane") -> "Hyperplane":
        """(i,j;x) o (j,k;y) = (i,k;x+y), after orienting the second factor."""
        o = other
        if o.i != self.j:
            o = Hyperplane(o.j, o.i, -o.x)
        if o.i != self.j or o.j == self.i:
            raise ValueError(f"{self} and {other} do not share exactly one index")
        return Hyperplane(self.i, o.j, self.x + o.x)

    def reflect_point(self, p: Sequence[int]) -> tuple[int, ...]:
        p = list(p)
        a, b = p[self.i - 1], p[self.j - 1]
        p[self.i - 1], p[self.j - 1] = b + self.x, a - self.x
        return tuple(p)

    def value(self, p: Sequence[int]) -> int:
        return p[self.i - 1] - p[self.j - 1] - self.x

    def reflect_hyperplane(self, h: "Hyperplane", d: int) -> "Hyperplane":
        """The image of h under the reflection in self."""
        c = [0] * d
        c[h.i - 1], c[h.j - 1] = 1, -1
        shift = (c[self.i - 1] - c[self.j - 1]) * self.x
        c[self.i - 1], c[self.j - 1] = c[self.j - 1], c[self.i - 1]
        plus = c.index(1) + 1
        minus = c.index(-1) + 1
        return Hyperplane(plus, minus, h.x - shift).normalized()


def hyperplane_closure(gens: Iterable[Hyperplane], d: int, bound: int) -> frozenset[Hyperplane]:
    """All reflections reachable by conjugation, kept within |x| <= bound."""
    found = {h.normalized() for h in gens}
    found = {h for h in found if abs(h.x) <= bound}
    queue = deque(found)
    while queue:
        h = queue.popleft()
        for g in list(found):
            for new in (g.reflect_hyperplane(h, d), h.reflect_hyperplane(g, d)):
                if abs(new.x) <= bound and new not in found:
                    found.add(new)
                    queue.append(new)
    return frozenset(found)


def _alphabet(w: Walk, hs: Iterable[Hyperplane]) -> int:
    d = max(w.word, default=1)
    for h in hs:
        d = max(d, h.i, h.j)
    return d


def touches(w, h: Hyperplane) -> list[int]:
    """Steps l (1 <= l <= |w|) at which the walk sits on h."""
    w = _as_walk(w)
    out = []
    ci = cj = 0
    for l, x in enumerate(w.word, start=1):
        ci += x == h.i
        cj += x == h.j
        if ci - cj == h.x:
            out.append(l)
    return out


def effective_touches(w, h: Hyperplane) -> list[int]:
    """Touches whose reflection changes the walk."""
    w = _as_walk(w)
    return [l for l in touches(w, h) if l < len(w) and w.word[l] in (h.i, h.j)]


def reflect_walk(w, h: Hyperplane, l: int) -> Walk:
    w = _as_walk(w)
    if l not in touches(w, h):
        raise NotTouching(f"{w} does not touch {h} at step {l}")
    swap = {h.i: h.j, h.j: h.i}
    return Walk(w.word[:l] + tuple(swap.get(x, x) for x in w.word[l:]))


def _default_bound(n: int, gens) -> int:
    return max([n] + [abs(h.x) for h in gens])


def walk_orbit(w, gens: Iterable[Hyperplane], bound: int | None = None) -> set[Walk]:
    """Closure of {w} under reflection at every touch of every group hyperplane."""
    w = _as_walk(w)
    gens = list(gens)
    d = _alphabet(w, gens)
    hs = hyperplane_closure(gens, d, bound if bound is not None else _default_bound(len(w), gens))
    seen = {w}
    queue = deque([w])
    while queue:
        v = queue.popleft()
        for h in hs:
            for l in effective_touches(v, h):
                u = reflect_walk(v, h, l)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return seen


def _fold(p: tuple[int, ...], hs) -> tuple[int, ...]:
    """Reflect p towards the origin until it is inside every hyperplane."""
    moved = True
    while moved:
        moved = False
        for h in hs:
            v = h.value(p)
            if v != 0 and (v > 0) != (-h.x > 0):
                p = h.reflect_point(p)
                moved = True
    return p


def walk_orbit_by_folding(w, gens: Iterable[Hyperplane], bound: int | None = None) -> set[Walk]:
    """Orbit as the set of lifts of the folded path (an independent route)."""
    w = _as_walk(w)
    gens = list(gens)
    d = _alphabet(w, gens)
    hs = sorted(hyperplane_closure(gens, d, bound if bound is not None else _default_bound(len(w), gens)),
                key=lambda h: (abs(h.x), h.i, h.j, h.x))
    target = [_fold(p, hs) for p in w.points(d)]
    out = set()

    def rec(prefix: tuple[int, ...], p: tuple[int, ...]):
        t = len(prefix)
        if t == len(w):
            out.add(Walk(prefix))
            return
        for k in range(1, d + 1):
            nxt = list(p)
            nxt[k - 1] += 1
            nxt = tuple(nxt)
            if _fold(nxt, hs) == target[t + 1]:
                rec(prefix + (k,), nxt)

    rec((), (0,) * d)
    return out


def _stabilizer_orbit_size(p, e: int, hs, d: int) -> int:
    """Size of the orbit of direction e under the linear parts fixing p."""
    fixing = [h for h in hs if h.value(p) == 0]
    seen = {e}
    queue = [e]
    while queue:
        a = queue.pop()
        for h in fixing:
            b = h.j if a == h.i else h.i if a == h.j else a
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return len(seen)


def orbit_size_formula(w, gens: Iterable[Hyperplane], bound: int | None = None) -> int:
    """Product over steps of the number of directions the stabilizer of the current point allows.

    When every touch point lies on a single hyperplane this is 2^t with t
    the number of effective touches.
    """
    w = _as_walk(w)
    gens = list(gens)
    d = _alphabet(w, gens)
    hs = hyperplane_closure(gens, d, bound if bound is not None else _default_bound(len(w), gens))
    pts = w.points(d)
    out = 1
    for t, step in enumerate(w.word):
        out *= _stabilizer_orbit_size(pts[t], step, hs, d)
    return out


def point_orbit(p: Sequence[int], gens: Iterable[Hyperplane], bound: int, degree: int | None = None) -> set:
    """Orbit of a lattice point, optionally restricted to non-negative points of a given degree."""
    p = tuple(p)
    d = len(p)
    hs = hyperplane_closure(gens, d, bound)
    seen = {p}
    queue = deque([p])
    while queue:
        a = queue.popleft()
        for h in hs:
            b = h.reflect_point(a)
            if max(abs(v) for v in b) > 2 * bound + sum(abs(v) for v in p):
                continue
            if b not in seen:
                seen.add(b)
                queue.append(b)
    if degree is not None:
        seen = {a for a in seen if min(a) >= 0 and sum(a) == degree}
    return seen


# ---------------------------------------------------------------------------
# weights, sorted and direct walks


def project_weight(mu: Multipartition):
    """Subtract the last degree from the others; an integer when d = 2."""
    if not mu.is_one_row:
        raise NotOneRow(f"{mu} is not one-row")
    deg = mu.degrees
    if len(deg) < 2:
        return ()
    out = tuple(a - deg[-1] for a in deg[:-1])
    return out[0] if len(out) == 1 else out


def sorted_walk(mu: Multipartition) -> Walk:
    if not mu.is_one_row:
        raise NotOneRow(f"{mu} is not one-row")
    return Walk(tuple(k + 1 for k, m in enumerate(mu.degrees) for _ in range(m)))


def is_sorted(w) -> bool:
    w = _as_walk(w).word
    return all(a <= b for a, b in zip(w, w[1:]))


def is_direct(w) -> bool:
    """All steps in each direction are taken consecutively."""
    w = _as_walk(w).word
    blocks = [a for i, a in enumerate(w) if i == 0 or w[i - 1] != a]
    return len(blocks) == len(set(blocks))


def direct_walks(mu: Multipartition) -> list[Walk]:
    if not mu.is_one_row:
        raise NotOneRow(f"{mu} is not one-row")
    used = [k + 1 for k, m in enumerate(mu.degrees) if m]
    out = set()
    for order in permutations(used):
        out.add(Walk(tuple(k for k in order for _ in range(mu.degrees[k - 1]))))
    return sorted(out)


def change_points(w) -> frozenset[int]:
    """Steps l with w_l != w_{l+1}."""
    w = _as_walk(w).word
    return frozenset(l for l in range(1, len(w)) if w[l - 1] != w[l])


def dominance(mu, nu) -> bool:
    """mu >= nu: every direction change of w(mu) is also one of w(nu).

    Arguments are one-row multipartitions (read through their sorted walks)
    or walks, which are used as given.
    """
    a = sorted_walk(mu) if isinstance(mu, Multipartition) else _as_walk(mu)
    b = sorted_walk(nu) if isinstance(nu, Multipartition) else _as_walk(nu)
    if len(a) != len(b):
        raise DegreeMismatch(f"degrees {len(a)} and {len(b)} differ")
    return change_points(a) <= change_points(b)
