"""Reflection groups induced by a specialization, and what they predict."""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from math import gcd

from .errors import InadmissibleSpecialization
from .ring import LaurentPoly, Specialization, specialize, vanishes_under
from .walks import (
    Hyperplane,
    Multipartition,
    Walk,
    change_points,
    direct_walks,
    hyperplane_closure,
    lambda_of_walk,
    multipartitions,
    one_row_weights,
    point_orbit,
    sorted_walk,
    walk_orbit,
)

__all__ = [
    "InducedGroup",
    "induced_group",
    "same_walk_orbit",
    "walk_difference",
    "contents",
    "linkage_classes",
    "linkage_classes_by_orbit",
    "PredictedHom",
    "predicted_homs",
    "blob_specialization",
]


@dataclass(frozen=True)
class InducedGroup:
    d: int
    l: int
    bound: int
    generators: tuple
    period: int | None = None

    @property
    def factor_set(self) -> list[LaurentPoly]:
        return [h.factor(self.d) for h in self.generators]

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def reflections(self, bound: int | None = None) -> frozenset:
        """All reflections of the group with |x| <= bound."""
        b = self.bound if bound is None else bound
        gens = self.generators if b <= self.bound else induced_group_gens(self._spec, self.d, b)
        return hyperplane_closure(gens, self.d, b)

    _spec: Specialization | None = field(default=None, compare=False, repr=False)


def induced_group_gens(k: Specialization, d: int, bound: int) -> tuple:
    out = []
    for i, j in itertools.combinations(range(1, d + 1), 2):
        for x in range(-bound, bound + 1):
            h = Hyperplane(i, j, x)
            if vanishes_under(h.factor(d), k):
                out.append(h)
    return tuple(out)


def induced_group(k: Specialization, d: int | None = None, bound: int = 6) -> InducedGroup:
    """Hyperplanes (i,j;x), |x| <= bound, whose factor l_i - q^{-2x} l_j dies under k."""
    d = k.d if d is None else d
    if d > k.d:
        raise InadmissibleSpecialization(f"specialization covers d = {k.d} < {d}")
    if not k.admissible:
        raise InadmissibleSpecialization("two lambda parameters coincide")
    gens = induced_group_gens(k, d, bound)
    period = None
    if k.l:
        period = k.l // gcd(k.l, 2)
    return InducedGroup(d, k.l, bound, gens, period, k)


@lru_cache(maxsize=1 << 16)
def _walk_laurent(word: tuple, d: int) -> tuple:
    return tuple(lambda_of_walk(Walk(word)).as_laurent(d))


@lru_cache(maxsize=256)
def _group_factors(G: InducedGroup, bound: int, d: int) -> tuple:
    return tuple(h.factor(d) for h in G.reflections(bound))


def walk_difference(w, v, d: int) -> list[LaurentPoly]:
    a = _walk_laurent(tuple(Walk(w).word) if not isinstance(w, Walk) else tuple(w.word), d)
    b = _walk_laurent(tuple(Walk(v).word) if not isinstance(v, Walk) else tuple(v.word), d)
    return [x - y for x, y in zip(a, b)]


def same_walk_orbit(w, v, G: InducedGroup) -> bool:
    """Every nonzero entry of lambda^w - lambda^v is divisible by a factor of a group reflection.

    At a root of unity an entry that already dies in the field (such as
    l_1 (q^l - 1)) counts as zero.
    """
    w = w if isinstance(w, Walk) else Walk(w)
    v = v if isinstance(v, Walk) else Walk(v)
    if len(w) != len(v):
        raise ValueError("walks of different length")
    if w == v:
        return True
    d = max(G.d, max(w.word + v.word))
    factors = _group_factors(G, max(G.bound, len(w)), d)
    k = G._spec
    a, b = _walk_laurent(tuple(w.word), d), _walk_laurent(tuple(v.word), d)
    for x, y in zip(a, b):
        if x == y:
            continue
        e = x - y
        if (k is not None and k.l and vanishes_under(e, k)):
            continue
        if not any(f.divides(e) for f in factors):
            return False
    return True


def contents(mu: Multipartition, k: Specialization) -> tuple:
    """Multiset of specialized box contents l_c q^{2(col - row)}, as a sorted tuple of strings."""
    d = mu.d
    out = []
    for c, part in enumerate(mu.components, start=1):
        for r, length in enumerate(part):
            for col in range(length):
                x = LaurentPoly.q(d, 2 * (col - r)) * LaurentPoly.lam(c, d)
                out.append(str(specialize(x, k)))
    return tuple(sorted(out))


def _weights(n: int, d: int, which: str):
    if which == "onerow":
        return one_row_weights(n, d)
    if which == "all":
        return multipartitions(n, d)
    raise ValueError("weights must be 'onerow' or 'all'")


def linkage_classes(n: int, d: int, k: Specialization, weights: str = "onerow") -> list[list[Multipartition]]:
    """Weights grouped by specialized content multiset."""
    if not k.admissible:
        raise InadmissibleSpecialization("two lambda parameters coincide")
    groups: dict = {}
    for mu in _weights(n, d, weights):
        groups.setdefault(contents(mu, k), []).append(mu)
    return sorted((sorted(g, key=str) for g in groups.values()), key=lambda g: str(g[0]))


def linkage_classes_by_orbit(n: int, d: int, k: Specialization) -> list[list[Multipartition]]:
    """One-row weights grouped by the orbit of their endpoint under the induced group."""
    G = induced_group(k, d, bound=2 * n + 2)
    hs = G.reflections()
    by_point = {tuple(mu.degrees): mu for mu in one_row_weights(n, d)}
    seen = set()
    out = []
    for p, mu in sorted(by_point.items()):
        if p in seen:
            continue
        orb = point_orbit(p, hs, G.bound, degree=n) if hs else {p}
        cls = sorted((by_point[a] for a in orb if a in by_point), key=str)
        seen.update(tuple(m.degrees) for m in cls)
        out.append(cls)
    return sorted(out, key=lambda g: str(g[0]))


@dataclass(frozen=True)
class PredictedHom:
    mu: Multipartition
    nu: Multipartition
    source_walk: Walk
    target_walk: Walk
    kappa: LaurentPoly
    kappa_value: str
    kappa_status: str

    def to_dict(self):
        return {
            "mu": str(self.mu),
            "nu": str(self.nu),
            "walks": [str(self.source_walk), str(self.target_walk)],
            "kappa": str(self.kappa),
            "kappa_value": self.kappa_value,
            "kappa_status": self.kappa_status,
        }


def _blocks(w: Walk) -> list[int]:
    return [len(list(g)) for _, g in itertools.groupby(w.word)]


def predicted_homs(n: int, d: int, k: Specialization, rewrite_limit: int = 4) -> list[PredictedHom]:
    """Pairs (mu, nu) with w(mu) ~ x for a direct walk x of nu refining w(mu), and kappa_nu != 0."""
    from .hecke import kappa, kappa_by_rewriting

    G = induced_group(k, d, bound=max(n, 1) + 1)
    if G.is_trivial:
        return []
    out = []
    ws = one_row_weights(n, d)
    for mu in ws:
        wm = sorted_walk(mu)
        orbit = walk_orbit(wm, G.generators, bound=max(G.bound, n))
        for nu in ws:
            if nu == mu:
                continue
            for x in direct_walks(nu):
                if not change_points(wm) <= change_points(x):
                    continue
                if x not in orbit:
                    continue
                kap = kappa(_blocks(x), 0)
                if n <= rewrite_limit:
                    if kappa_by_rewriting(_blocks(wm), _blocks(x)) != kap:
                        raise ArithmeticError("kappa from rewriting disagrees with the Poincare formula")
                    status = "rewriting"
                else:
                    status = "unchecked"
                val = specialize(kap, k)
                if val.is_zero():
                    continue
                out.append(PredictedHom(mu, nu, wm, x, kap, str(val), status))
                break
    return out


def blob_specialization(l: int, m: int) -> Specialization:
    """d = 2 with q of order 2l (so [l] = 0) and l_1, l_2 -> q^m, q^-m."""
    return Specialization(2, 2 * l, ((1, m), (1, -m)))
