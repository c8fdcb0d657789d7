"""Cyclotomic Hecke algebra H(n, d) in the basis X^a g_w.

Elements are stored as ``sum_b num[b] * b / (den * q**sh)`` with ``num`` and
``den`` FLINT polynomials in q, l1..ld.  All rewriting is done by left
operators: ``G_i = q g_i`` and the Jucys-Murphy elements ``X_k``.  Right
multiplication by ``g_i`` is a permutation-table lookup; right multiplication
by ``X`` goes through the anti-involution ``*`` fixing every generator.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import flint
import numpy as np

from .errors import InexactDivision, NoUnitCoefficient, SizeLimit
from .ring import LaurentPoly, RationalFn, Specialization, field_rank, poly_context, specialize

__all__ = [
    "HeckeWord",
    "HeckeAlgebra",
    "HeckeElement",
    "IdempotentSpec",
    "IdempotentReport",
    "algebra",
    "multiply",
    "x_element",
    "build_idempotent",
    "idempotent_by_symmetrizer",
    "verify_idempotent",
    "preidempotent",
    "ideal_membership",
    "ideal_dimension",
    "sandwich_coefficient",
    "center_checks",
    "walk_preidempotent",
    "conjectured_basis_count",
    "conjectured_basis_enumerate",
    "young_symmetrizer",
    "kappa",
    "kappa_by_rewriting",
    "P_poly",
]


# ---------------------------------------------------------------------------
# permutations


def _length(w: tuple) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def _swap_values(w: tuple, i: int) -> tuple:
    """s_i w for the simple transposition s_i = (i-1 i), 0-based values."""
    return tuple(i if v == i - 1 else i - 1 if v == i else v for v in w)


def _swap_positions(w: tuple, i: int) -> tuple:
    lst = list(w)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def _reduced_word(w: tuple) -> tuple:
    """Lexicographically least reduced expression, read left to right."""
    word = []
    w = tuple(w)
    while True:
        pos = {v: k for k, v in enumerate(w)}
        i = next((i for i in range(1, len(w)) if pos[i] < pos[i - 1]), None)
        if i is None:
            return tuple(word)
        word.append(i)
        w = _swap_values(w, i)


def _perm_of_word(word: Sequence[int], n: int) -> tuple:
    w = tuple(range(n))
    for i in reversed(word):
        w = _swap_values(w, i)
    return w


def _inverse(w: tuple) -> tuple:
    inv = [0] * len(w)
    for k, v in enumerate(w):
        inv[v] = k
    return tuple(inv)


@dataclass(frozen=True, order=True)
class HeckeWord:
    """Basis word X1^a1 ... Xn^an g_w with w given by its canonical reduced word."""

    a: tuple
    w: tuple = ()

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def perm(self) -> tuple:
        return _perm_of_word(self.w, len(self.a))

    @classmethod
    def from_key(cls, key) -> "HeckeWord":
        a, perm = key
        return cls(tuple(a), _reduced_word(perm))

    @property
    def key(self):
        return (self.a, self.perm)

    def __str__(self):
        parts = []
        for k, e in enumerate(self.a, start=1):
            if e == 1:
                parts.append(f"X{k}")
            elif e:
                parts.append(f"X{k}^{e}")
        parts += [f"g{i}" for i in self.w]
        return "*".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str, n: int) -> "HeckeWord":
        a = [0] * n
        word = []
        text = text.strip()
        if text != "1":
            for tok in text.split("*"):
                tok = tok.strip()
                if tok.startswith("X"):
                    base, _, e = tok[1:].partition("^")
                    a[int(base) - 1] += int(e) if e else 1
                elif tok.startswith("g"):
                    word.append(int(tok[1:]))
                else:
                    raise ValueError(f"bad basis token {tok!r}")
        perm = _perm_of_word(word, n)
        if len(word) != _length(perm):
            raise ValueError(f"{text!r} is not a reduced word")
        return cls(tuple(a), _reduced_word(perm))


# ---------------------------------------------------------------------------
# the algebra


def _addto(out: dict, key, c):
    v = out.get(key)
    if v is None:
        out[key] = c
    else:
        v = v + c
        if v.is_zero():
            del out[key]
        else:
            out[key] = v


def _scale(vec: dict, c) -> dict:
    if c == 1:
        return dict(vec)
    return {k: v * c for k, v in vec.items()}


def _combine(parts: Iterable[tuple[dict, int]], q) -> tuple[dict, int]:
    """Sum of vec * q^-s over parts, as a single (vec, s)."""
    parts = [(v, s) for v, s in parts if v]
    if not parts:
        return {}, 0
    top = max(s for _, s in parts)
    out: dict = {}
    for v, s in parts:
        f = q ** (top - s)
        for k, c in v.items():
            _addto(out, k, c * f if top != s else c)
    return out, top


class HeckeAlgebra:
    """Rewriting engine for H(n, d) over Z[q, q^-1, l1..ld]."""

    def __init__(self, n: int, d: int):
        if n < 1 or d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        self.n, self.d = n, d
        self.ctx = poly_context(d)
        gens = self.ctx.gens()
        self.q = gens[0]
        self.lam = (None,) + tuple(gens[1:])
        self.one_poly = self.ctx.from_dict({(0,) * (d + 1): 1})
        self.qq1 = self.q ** 2 - 1
        self.perms = sorted(itertools.permutations(range(n)), key=lambda w: (_length(w), _reduced_word(w)))
        self.identity = tuple(range(n))
        self.word_of = {w: _reduced_word(w) for w in self.perms}
        self.length_of = {w: len(self.word_of[w]) for w in self.perms}
        self.lmul = {}
        self.rmul = {}
        for i in range(1, n):
            self.lmul[i] = {}
            self.rmul[i] = {}
            for w in self.perms:
                pos = _inverse(w)
                self.lmul[i][w] = (_swap_values(w, i), pos[i - 1] < pos[i])
                self.rmul[i][w] = (_swap_positions(w, i), w[i - 1] < w[i])
        # X^d = sum_k red[k] X^k
        coeffs = [self.one_poly]
        for i in range(1, d + 1):
            nxt = [self.ctx.from_dict({})] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - c * self.lam[i]
            coeffs = nxt
        self.red = [-c for c in coeffs[:d]]
        self._star_cache: dict = {}

    # -- basis --------------------------------------------------------------
    @cached_property
    def basis_keys(self) -> list:
        exps = list(itertools.product(range(self.d), repeat=self.n))
        return [(a, w) for w in self.perms for a in exps]

    @cached_property
    def key_index(self) -> dict:
        return {k: i for i, k in enumerate(self.basis_keys)}

    def basis(self) -> list[HeckeWord]:
        return [HeckeWord.from_key(k) for k in self.basis_keys]

    @property
    def dimension(self) -> int:
        return self.d ** self.n * math.factorial(self.n)

    def const(self, c) -> "HeckeElement":
        return HeckeElement.scalar(self, c)

    def one(self) -> "HeckeElement":
        return self.const(1)

    def word(self, a=None, perm=None) -> "HeckeElement":
        a = tuple(a) if a is not None else (0,) * self.n
        perm = tuple(perm) if perm is not None else self.identity
        return HeckeElement(self, {(a, perm): self.one_poly})

    def g(self, i: int) -> "HeckeElement":
        if not 1 <= i < self.n:
            raise ValueError(f"g{i} not in H({self.n},{self.d})")
        return self.word(perm=_swap_positions(self.identity, i))

    def X(self, k: int = 1) -> "HeckeElement":
        if not 1 <= k <= self.n:
            raise ValueError(f"X{k} not in H({self.n},{self.d})")
        vec, s = self._X(k, {((0,) * self.n, self.identity): self.one_poly})
        return HeckeElement(self, vec, sh=s)

    def lam_poly(self, i: int):
        return self.lam[i]

    # -- left operators -------------------------------------------------------
    def _G(self, i: int, vec: dict) -> dict:
        """q * g_i * vec."""
        out: dict = {}
        q, qq1 = self.q, self.qq1
        table = self.lmul[i]
        i0, i1 = i - 1, i
        for (a, w), c in vec.items():
            x, y = a[i0], a[i1]
            if x == y:
                sa = a
            else:
                sa = list(a)
                sa[i0], sa[i1] = y, x
                sa = tuple(sa)
            sw, asc = table[w]
            if asc:
                _addto(out, (sa, sw), c * q)
            else:
                _addto(out, (sa, w), c * qq1)
                _addto(out, (sa, sw), c * q)
            if x != y:
                cq = c * qq1
                b = list(a)
                if x > y:
                    cq = -cq
                    for k in range(x - y):
                        b[i0], b[i1] = x - 1 - k, y + k + 1
                        _addto(out, (tuple(b), w), cq)
                else:
                    for k in range(y - x):
                        b[i0], b[i1] = y - 1 - k, x + k + 1
                        _addto(out, (tuple(b), w), cq)
        return out

    def _X1(self, vec: dict) -> dict:
        out: dict = {}
        top = self.d - 1
        for (a, w), c in vec.items():
            if a[0] < top:
                _addto(out, ((a[0] + 1,) + a[1:], w), c)
            else:
                for k, r in enumerate(self.red):
                    if not r.is_zero():
                        _addto(out, ((k,) + a[1:], w), c * r)
        return out

    def _X(self, k: int, vec: dict) -> tuple[dict, int]:
        """X_k * vec as (vec', s) meaning vec' * q^-s."""
        if k == 1:
            return self._X1(vec), 0
        top = self.d - 1
        direct: dict = {}
        over: dict = {}
        j = k - 1
        for (a, w), c in vec.items():
            if a[j] < top:
                b = list(a)
                b[j] += 1
                _addto(direct, (tuple(b), w), c)
            else:
                over[(a, w)] = c
        if not over:
            return direct, 0
        v = self._G(k - 1, over)
        v, s1 = self._X(k - 1, v)
        v = self._G(k - 1, v)
        return _combine([(direct, 0), (v, 2 + s1)], self.q)

    def _left_word(self, key, vec: dict) -> tuple[dict, int]:
        a, w = key
        s = 0
        for i in reversed(self.word_of[w]):
            vec = self._G(i, vec)
            s += 1
        for k in range(self.n, 0, -1):
            for _ in range(a[k - 1]):
                vec, t = self._X(k, vec)
                s += t
        return vec, s

    def _rG(self, i: int, vec: dict) -> dict:
        """vec * q * g_i."""
        out: dict = {}
        q, qq1 = self.q, self.qq1
        table = self.rmul[i]
        for (a, w), c in vec.items():
            ws, asc = table[w]
            if asc:
                _addto(out, (a, ws), c * q)
            else:
                _addto(out, (a, w), c * qq1)
                _addto(out, (a, ws), c * q)
        return out

    def _star_key(self, key) -> tuple[dict, int]:
        hit = self._star_cache.get(key)
        if hit is None:
            a, w = key
            vec = {(a, self.identity): self.one_poly}
            word = tuple(reversed(self.word_of[w]))  # reduced word of w^-1
            for i in reversed(word):
                vec = self._G(i, vec)
            hit = (vec, len(word))
            self._star_cache[key] = hit
        return hit

    def _star(self, vec: dict) -> tuple[dict, int]:
        parts = []
        for key, c in vec.items():
            v, s = self._star_key(key)
            parts.append((_scale(v, c), s))
        return _combine(parts, self.q)

    def _rX(self, vec: dict) -> tuple[dict, int]:
        """vec * X as (vec', s)."""
        v, s1 = self._star(vec)
        v = self._X1(v)
        v, s2 = self._star(v)
        return v, s1 + s2

    def _mul(self, xv: dict, yv: dict) -> tuple[dict, int]:
        parts = []
        for key, c in xv.items():
            v, s = self._left_word(key, yv)
            parts.append((_scale(v, c), s))
        return _combine(parts, self.q)

    # -- coefficient handling ------------------------------------------------
    def laurent(self, p, shift: int = 0) -> LaurentPoly:
        return LaurentPoly(self.d, p, shift)

    def _split_scalar(self, c):
        """Scalar -> (num poly, den poly, sh) with value num / (den q^sh)."""
        if isinstance(c, (int, flint.fmpz)):
            return self.ctx.from_dict({(0,) * (self.d + 1): int(c)}) if c else self.ctx.from_dict({}), self.one_poly, 0
        if isinstance(c, LaurentPoly):
            c = c.lifted(self.d)
            return c._p, self.one_poly, -c._s
        if isinstance(c, RationalFn):
            num, den = c.num.lifted(self.d), c.den.lifted(self.d)
            return num._p, den._p, den._s - num._s
        raise TypeError(f"unsupported scalar {type(c).__name__}")


@lru_cache(maxsize=None)
def algebra(n: int, d: int) -> HeckeAlgebra:
    return HeckeAlgebra(n, d)


# ---------------------------------------------------------------------------
# elements


class HeckeElement:
    """Immutable element of H(n, d); value is sum num[b] b / (den q^sh)."""

    __slots__ = ("alg", "num", "den", "sh")

    def __init__(self, alg: HeckeAlgebra, num: Mapping, den=None, sh: int = 0):
        self.alg = alg
        self.num = {k: v for k, v in num.items() if not v.is_zero()}
        self.den = alg.one_poly if den is None else den
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.sh = sh

    @classmethod
    def scalar(cls, alg: HeckeAlgebra, c) -> "HeckeElement":
        num, den, sh = alg._split_scalar(c)
        return cls(alg, {((0,) * alg.n, alg.identity): num}, den, sh)

    @classmethod
    def from_terms(cls, alg: HeckeAlgebra, terms: Mapping) -> "HeckeElement":
        """From {HeckeWord or key: scalar}."""
        out = cls(alg, {})
        for w, c in terms.items():
            key = w.key if isinstance(w, HeckeWord) else w
            out = out + cls.scalar(alg, c) * HeckeElement(alg, {key: alg.one_poly})
        return out

    # -- views ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def coefficient(self, word) -> RationalFn:
        key = word.key if isinstance(word, HeckeWord) else word
        c = self.num.get(key)
        if c is None:
            return RationalFn(LaurentPoly(self.alg.d))
        return RationalFn(self.alg.laurent(c), self.alg.laurent(self.den, self.sh))

    @property
    def terms(self) -> dict:
        order = self.alg.key_index
        return {HeckeWord.from_key(k): self.coefficient(k) for k in sorted(self.num, key=order.__getitem__)}

    def support(self) -> list[HeckeWord]:
        order = self.alg.key_index
        return [HeckeWord.from_key(k) for k in sorted(self.num, key=order.__getitem__)]

    def to_dict(self) -> dict:
        return {str(w): str(c) for w, c in self.terms.items()}

    def __str__(self):
        if not self.num:
            return "0"
        return " + ".join(f"({c})*{w}" for w, c in self.terms.items())

    def __repr__(self):
        return f"HeckeElement(n={self.alg.n}, d={self.alg.d}, {self})"

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "HeckeElement":
        if isinstance(other, HeckeElement):
            if (other.alg.n, other.alg.d) != (self.alg.n, self.alg.d):
                raise ValueError("elements live in different algebras")
            return other
        return HeckeElement.scalar(self.alg, other)

    def __add__(self, other):
        o = self._coerce(other)
        if not o.num:
            return self
        if not self.num:
            return o
        q = self.alg.q
        if self.den == o.den:
            den, f1, f2 = self.den, None, None
        else:
            g = self.den.gcd(o.den)
            f1, f2 = o.den // g, self.den // g
            den = self.den * f1
        sh = max(self.sh, o.sh)
        m1 = q ** (sh - self.sh)
        m2 = q ** (sh - o.sh)
        if f1 is not None:
            m1, m2 = m1 * f1, m2 * f2
        out = {k: v * m1 for k, v in self.num.items()}
        for k, v in o.num.items():
            _addto(out, k, v * m2)
        return HeckeElement(self.alg, out, den, sh)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement(self.alg, {k: -v for k, v in self.num.items()}, self.den, self.sh)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "HeckeElement":
        num, den, sh = self.alg._split_scalar(c)
        return HeckeElement(self.alg, {k: v * num for k, v in self.num.items()}, self.den * den, self.sh + sh)

    def __mul__(self, other):
        if not isinstance(other, HeckeElement):
            return self.scale(other)
        o = self._coerce(other)
        vec, s = self.alg._mul(self.num, o.num)
        return HeckeElement(self.alg, vec, self.den * o.den, self.sh + o.sh + s)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, (HeckeElement, int, LaurentPoly, RationalFn)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __pow__(self, k: int):
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    # -- structure maps -------------------------------------------------------
    def star(self) -> "HeckeElement":
        vec, s = self.alg._star(self.num)
        return HeckeElement(self.alg, vec, self.den, self.sh + s)

    def _map_coeffs(self, f) -> "HeckeElement":
        alg = self.alg
        den = f(alg.laurent(self.den, self.sh))
        nums = {k: f(alg.laurent(v)) for k, v in self.num.items()}
        lo = min((v._s for v in nums.values()), default=0)
        q = alg.q
        out = {k: v._p * q ** (v._s - lo) for k, v in nums.items()}
        return HeckeElement(alg, out, den._p, den._s - lo)

    def bar_t(self) -> "HeckeElement":
        """Coefficientwise q -> -q^-1 (the involution t)."""
        return self._map_coeffs(LaurentPoly.bar_t)

    def cycle(self, k: int = 1) -> "HeckeElement":
        """Coefficientwise l_i -> l_{i+k} (the involution s, iterated)."""
        return self._map_coeffs(lambda p: p.cycle_lambdas(k))

    def canonical(self) -> "HeckeElement":
        """Cancel common factors between the numerators and the denominator."""
        if not self.num:
            return HeckeElement(self.alg, {})
        g = self.den
        for v in self.num.values():
            g = g.gcd(v)
            if g.is_constant():
                break
        num = {k: v // g for k, v in self.num.items()} if not g.is_constant() else dict(self.num)
        den = self.den // g if not g.is_constant() else self.den
        qv = min(int(v.term_content().degrees()[0]) for v in num.values())
        sh = self.sh
        if qv:
            qq = self.alg.q ** qv
            num = {k: v // qq for k, v in num.items()}
            sh -= qv
        if den.leading_coefficient() < 0:
            num = {k: -v for k, v in num.items()}
            den = -den
        return HeckeElement(self.alg, num, den, sh)

    def embed(self, n: int) -> "HeckeElement":
        """Image under the inclusion H(m, d) -> H(n, d), m <= n."""
        m = self.alg.n
        if n < m:
            raise ValueError("can only embed into a larger algebra")
        alg = algebra(n, self.alg.d)
        pad = (0,) * (n - m)
        tail = tuple(range(m, n))
        num = {(a + pad, w + tail): c for (a, w), c in self.num.items()}
        return HeckeElement(alg, num, self.den, self.sh)

    def specialize(self, k: Specialization) -> dict:
        """Normal form over the field of k; raises PoleAtSpecialization."""
        return {w: specialize(c, k) for w, c in self.terms.items()}

    def evaluate_mod(self, point: "_ModPoint") -> dict:
        inv = point.inverse(point.eval(self.den) * pow(point.qv, self.sh, point.p) % point.p)
        out = {}
        for k, v in self.num.items():
            x = point.eval(v) * inv % point.p
            if x:
                out[k] = x
        return out


def multiply(x: HeckeElement, y: HeckeElement) -> HeckeElement:
    return x * y


def x_element(j: int, n: int, d: int) -> HeckeElement:
    return algebra(n, d).X(j)


# ---------------------------------------------------------------------------
# idempotents


@dataclass(frozen=True)
class IdempotentSpec:
    sign: int
    l: int
    n: int
    d: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not 1 <= self.l <= self.d:
            raise ValueError("l must lie in 1..d")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def label(self) -> str:
        return f"E({'+' if self.sign > 0 else '-'},{self.l},{self.n})"


def _lam_elem(alg: HeckeAlgebra, i: int):
    """Elementary symmetric function of degree i in -l2, ..., -ld."""
    ctx = alg.ctx
    out = ctx.from_dict({})
    for combo in itertools.combinations(range(2, alg.d + 1), i):
        t = alg.one_poly
        for j in combo:
            t = t * (-alg.lam[j])
        out = out + t
    return out


def P_poly(alg: HeckeAlgebra, k: int):
    """q^(k-1)[k] prod_{i>1} (q^(2k-2) l1 - li); zero for k = 0."""
    if k == 0:
        return alg.ctx.from_dict({})
    q = alg.q
    qk = sum((q ** (2 * t) for t in range(k)), alg.ctx.from_dict({}))
    out = qk
    for i in range(2, alg.d + 1):
        out = out * (q ** (2 * k - 2) * alg.lam[1] - alg.lam[i])
    return out


def _alpha_numerators(alg: HeckeAlgebra, j: int, variant: str = "corrected") -> list:
    """P(j+1) * alpha^i_{j+1} for i = 0..d-1 (polynomials).

    In the inner sum the q-exponent is (l-1)(2j-2); the variant "shared" uses
    (i-1)(2j-2) for every term, which agrees for d <= 3 and fails from d = 4 on.
    """
    d, q = alg.d, alg.q
    A = [None] * d
    A[0] = _lam_elem(alg, d - 1)
    for i in range(1, d):
        val = q ** (2 * j) * _lam_elem(alg, i - 1)
        if j > 0:
            for l in range(2, i + 1):
                ex = (i - 1 if variant == "shared" else l - 1) * (2 * j - 2)
                val = val + q ** ex * (q ** (2 * j) - 1) * alg.lam[1] ** (l - 1) * _lam_elem(alg, i - l)
        A[d - i] = val
    return A


class _Builder:
    """D_j E(+,1,j) Y computed with exact divisions, D_j = prod_{k<=j} P(k)."""

    def __init__(self, alg: HeckeAlgebra, variant: str = "corrected"):
        self.alg = alg
        self.variant = variant
        self.P = [P_poly(alg, k) for k in range(alg.n + 1)]
        self.D = [alg.one_poly]
        for k in range(1, alg.n + 1):
            self.D.append(self.D[-1] * self.P[k])
        self.A = [None] + [_alpha_numerators(alg, j - 1, variant) for j in range(1, alg.n + 1)]

    def apply_M(self, j: int, vec: dict) -> tuple[dict, int]:
        alg = self.alg
        parts = []
        if j >= 2:
            parts.append((_scale(alg._G(j - 1, vec), self.P[j - 1]), 0))
        cur, s = vec, 0
        for i, a in enumerate(self.A[j]):
            if i:
                cur, t = alg._X(j, cur)
                s += t
            if not a.is_zero():
                parts.append((_scale(cur, a), s))
        return _combine(parts, alg.q)

    def T(self, j: int, vec: dict, s: int) -> tuple[dict, int]:
        if j == 0 or not vec:
            return vec, s
        v, s1 = self.T(j - 1, vec, s)
        v, t = self.apply_M(j, v)
        v, s2 = self.T(j - 1, v, s1 + t)
        div = self.D[j - 1]
        if div != self.alg.one_poly:
            out = {}
            for k, c in v.items():
                quo, rem = divmod(c, div)
                if not rem.is_zero():
                    raise InexactDivision("idempotent recursion left a remainder")
                out[k] = quo
            v = out
        return v, s2


@lru_cache(maxsize=None)
def _build_plus_one(n: int, d: int, variant: str = "corrected") -> HeckeElement:
    alg = algebra(n, d)
    b = _Builder(alg, variant)
    vec, s = b.T(n, {((0,) * n, alg.identity): alg.one_poly}, 0)
    return HeckeElement(alg, vec, b.D[n], s).canonical()


def build_idempotent(spec: IdempotentSpec, at: Specialization | None = None, variant: str = "corrected"):
    """E(sign, l, n) over the fraction field; with ``at`` also specialize it."""
    e = _build_plus_one(spec.n, spec.d, variant)
    if spec.l != 1:
        e = e.cycle(spec.l - 1)
    if spec.sign < 0:
        e = e.bar_t()
    e = e.canonical()
    if at is not None:
        return e.specialize(at)
    return e


def _from_laurent(alg: HeckeAlgebra, coeffs: Mapping) -> HeckeElement:
    coeffs = {k: v.lifted(alg.d) for k, v in coeffs.items() if not v.is_zero()}
    if not coeffs:
        return HeckeElement(alg, {})
    lo = min(v._s for v in coeffs.values())
    q = alg.q
    return HeckeElement(alg, {k: v._p * q ** (v._s - lo) for k, v in coeffs.items()}, alg.one_poly, -lo)


def young_symmetrizer(alg: HeckeAlgebra, blocks: Sequence[int] | None = None, sign: int = 1) -> HeckeElement:
    """Sum over the Young subgroup of q^l(w) g_w (sign +1) or (-q^-1)^l(w) g_w (sign -1)."""
    blocks = [b for b in (blocks or [alg.n]) if b]
    if sum(blocks) != alg.n:
        raise ValueError("blocks must sum to n")
    starts = list(itertools.accumulate([0] + blocks[:-1]))
    zero = (0,) * alg.n
    coeffs = {}
    for w in alg.perms:
        if all(st <= w[k] < st + b for st, b in zip(starts, blocks) for k in range(st, st + b)):
            ln = alg.length_of[w]
            c = LaurentPoly.q(alg.d, ln) if sign > 0 else LaurentPoly.q(alg.d, -ln) * (-1) ** ln
            coeffs[(zero, w)] = c
    return _from_laurent(alg, coeffs)


def _eigen_X(spec: IdempotentSpec, k: int) -> LaurentPoly:
    return LaurentPoly.q(spec.d, spec.sign * (2 * k - 2)) * LaurentPoly.lam(spec.l, spec.d)


def idempotent_by_symmetrizer(spec: IdempotentSpec) -> HeckeElement:
    """Independent route: z^l_n times the normalised q-symmetrizer, over R(z)."""
    alg = algebra(spec.n, spec.d)
    d = spec.d
    e = young_symmetrizer(alg, None, spec.sign)
    norm = sum((c * c for c in (e.coefficient(k).as_laurent() for k in e.num)), LaurentPoly(d))
    z = alg.one()
    rz = LaurentPoly(d, 1)
    for k in range(1, spec.n + 1):
        xk = alg.X(k)
        for i in range(1, d + 1):
            if i != spec.l:
                z = (xk - LaurentPoly.lam(i, d)) * z
                rz = rz * (_eigen_X(spec, k) - LaurentPoly.lam(i, d))
    return (z * e).scale(RationalFn(LaurentPoly(d, 1), norm * rz)).canonical()


# ---------------------------------------------------------------------------
# verification


@dataclass
class IdempotentReport:
    spec: IdempotentSpec
    zero: bool
    idempotent: bool
    idempotent_route: str
    eigen_X: bool
    eigen_g: tuple
    central_g: tuple
    central_X: bool

    @property
    def passed(self) -> bool:
        return (not self.zero and self.idempotent and self.eigen_X and all(self.eigen_g)
                and all(self.central_g) and self.central_X)

    def failures(self) -> list[str]:
        out = []
        if self.zero:
            out.append("zero element")
        if not self.idempotent:
            out.append("e*e != e")
        if not self.eigen_X:
            out.append("(X - l) e != 0")
        out += [f"(g{i + 1} - R(g)) e != 0" for i, ok in enumerate(self.eigen_g) if not ok]
        out += [f"[e, g{i + 1}] != 0" for i, ok in enumerate(self.central_g) if not ok]
        if not self.central_X:
            out.append("[e, X] != 0")
        return out

    def to_dict(self) -> dict:
        return {"spec": self.spec.label, "passed": self.passed, "zero": self.zero,
                "idempotent": self.idempotent, "idempotent_route": self.idempotent_route,
                "eigen_X": self.eigen_X, "eigen_g": list(self.eigen_g),
                "central_g": list(self.central_g), "central_X": self.central_X}


def _vec_sub(a: dict, b: dict, f=None) -> dict:
    out = dict(a)
    for k, c in b.items():
        _addto(out, k, -(c * f) if f is not None else -c)
    return out


def _character(e: HeckeElement, spec: IdempotentSpec) -> RationalFn:
    """Value of the one-dimensional representation R_{sign, l} on e."""
    d = e.alg.d
    eig = [_eigen_X(spec, k) for k in range(1, e.alg.n + 1)]
    rg = LaurentPoly.q(d, 1) if spec.sign > 0 else -LaurentPoly.q(d, -1)
    total = LaurentPoly(d)
    for (a, w), c in e.num.items():
        t = e.alg.laurent(c) * rg ** e.alg.length_of[w]
        for k, ak in enumerate(a):
            if ak:
                t = t * eig[k] ** ak
        total = total + t
    return RationalFn(total, e.alg.laurent(e.den, e.sh))


def verify_idempotent(e: HeckeElement, spec: IdempotentSpec, direct: bool | None = None) -> IdempotentReport:
    """Exact checks of the defining equations of E(sign, l, n).

    The square is compared directly when ``direct`` (default: n <= 2).
    Otherwise e^2 = R(e) e follows from the left eigen-equations, so the
    square is checked through the scalar R(e).
    """
    alg = e.alg
    v = e.num
    q = alg.q
    lam = alg.lam[spec.l]
    eig_g = []
    cen_g = []
    f = q ** 2 if spec.sign > 0 else -alg.one_poly
    for i in range(1, alg.n):
        gv = alg._G(i, v)
        eig_g.append(not _vec_sub(gv, v, f))
        cen_g.append(not _vec_sub(gv, alg._rG(i, v)))
    xv = alg._X1(v)
    eig_x = not _vec_sub(xv, v, lam)
    rv, s = alg._rX(v)
    cen_x = not _vec_sub(_scale(xv, q ** s), rv)
    if direct is None:
        direct = alg.n <= 2
    if not v:
        idem, route = True, "trivial"
    elif direct or not (eig_x and all(eig_g)):
        idem, route = (e * e == e), "direct"
    else:
        idem, route = (_character(e, spec) == 1), "character"
    return IdempotentReport(spec, not v, idem, route, eig_x, tuple(eig_g), tuple(cen_g), cen_x)


def preidempotent(e: HeckeElement):
    """(e_hat, a) with e_hat = a e integral, primitive, first unit coefficient equal to 1."""
    alg = e.alg
    e = e.canonical()
    if not e.num:
        raise NoUnitCoefficient("zero has no preidempotent")
    g = None
    for c in e.num.values():
        g = c if g is None else g.gcd(c)
    num = {k: c // g for k, c in e.num.items()}
    a = RationalFn(alg.laurent(e.den, e.sh), alg.laurent(g))
    order = alg.key_index
    unit = None
    for k in sorted(num, key=order.__getitem__):
        lp = alg.laurent(num[k])
        if lp.is_unit():
            unit = lp
            break
    if unit is None:
        raise NoUnitCoefficient("no coefficient is a unit after clearing denominators")
    c = int(unit._p.leading_coefficient())
    num = {k: v * c for k, v in num.items()}
    out = HeckeElement(alg, num, alg.one_poly, unit._s)
    a = a * RationalFn(LaurentPoly(alg.d, c, -unit._s))
    return out, (a.as_laurent() if a.is_polynomial() else a)


# ---------------------------------------------------------------------------
# two-sided ideals, by modular linear algebra


_PRIME = (1 << 31) - 1


class _ModPoint:
    """A random point (q, l1..ld) modulo a prime."""

    def __init__(self, d: int, rng: random.Random, p: int = _PRIME):
        self.p = p
        self.qv = rng.randrange(2, p - 1)
        self.lamv = [rng.randrange(2, p - 1) for _ in range(d)]

    def eval(self, poly) -> int:
        return int(poly(self.qv, *self.lamv)) % self.p

    def inverse(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("unlucky evaluation point")
        return pow(x, -1, self.p)


def _to_row(alg: HeckeAlgebra, vec: dict, s: int, point: _ModPoint) -> np.ndarray:
    p = point.p
    f = point.inverse(pow(point.qv, s, p)) if s else 1
    row = np.zeros(alg.dimension, dtype=np.int64)
    idx = alg.key_index
    for k, c in vec.items():
        row[idx[k]] = point.eval(c) * f % p
    return row


def _scaled_row(alg: HeckeAlgebra, x: HeckeElement, point: _ModPoint) -> np.ndarray:
    f = point.inverse(point.eval(x.den) * pow(point.qv, x.sh, point.p))
    return _to_row(alg, x.num, 0, point) * f % point.p


def _mm(A: np.ndarray, M: np.ndarray, p: int) -> np.ndarray:
    """A @ M mod p without int64 overflow (p < 2^31, inner size < 2^11)."""
    hi, lo = A >> 16, A & 0xFFFF
    return ((hi @ M) % p * 65536 + lo @ M) % p


def _rref(R: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    R = R.copy()
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            R[hit] = (R[hit] - f[hit, None] * R[r]) % p
        piv.append(c)
        r += 1
    return R[:r], piv


class _ModSpace:
    """Row space over F_p kept in reduced echelon form."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.B = np.zeros((0, ncols), dtype=np.int64)
        self.piv: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.piv)

    def reduce(self, C: np.ndarray) -> np.ndarray:
        if not self.piv:
            return C % self.p
        return (C - _mm(C[:, self.piv], self.B, self.p)) % self.p

    def add(self, C: np.ndarray) -> np.ndarray:
        """Absorb the rows of C; return the new echelon rows."""
        R = self.reduce(C)
        R = R[np.any(R != 0, axis=1)]
        if R.shape[0] == 0:
            return R
        E, piv = _rref(R, self.p)
        if self.piv:
            self.B = (self.B - _mm(self.B[:, piv], E, self.p)) % self.p
        self.B = np.vstack([self.B, E])
        self.piv += piv
        return E


def _operator_matrices(alg: HeckeAlgebra, point: _ModPoint) -> list[np.ndarray]:
    """Row-action matrices (x -> x M) of left and right multiplication by the generators."""
    ops = []
    for i in range(1, alg.n):
        ops.append(lambda v, i=i: (alg._G(i, v), 1))
        ops.append(lambda v, i=i: (alg._rG(i, v), 1))
    ops.append(lambda v: (alg._X1(v), 0))
    ops.append(alg._rX)
    mats = []
    for op in ops:
        mats.append(np.vstack([_to_row(alg, *op({key: alg.one_poly}), point) for key in alg.basis_keys]))
    return mats


def _ideal_space(alg: HeckeAlgebra, gens: Sequence[HeckeElement], point: _ModPoint) -> _ModSpace:
    space = _ModSpace(alg.dimension, point.p)
    if not gens:
        return space
    new = space.add(np.vstack([_scaled_row(alg, g, point) for g in gens]))
    if new.shape[0] == 0:
        return space
    mats = _operator_matrices(alg, point)
    while new.shape[0]:
        new = space.add(np.vstack([_mm(new, M, point.p) for M in mats]))
    return space


def _check_size(alg: HeckeAlgebra, max_dim: int):
    if alg.dimension > max_dim:
        raise SizeLimit(f"dim H({alg.n},{alg.d}) = {alg.dimension} exceeds the limit {max_dim}")


def _points(d: int, trials: int, seed: int):
    rng = random.Random(seed)
    return [_ModPoint(d, rng) for _ in range(trials)]


def ideal_dimension(generators: Sequence[HeckeElement], n: int, d: int, *, trials: int = 2,
                    seed: int = 0, max_dim: int = 2000) -> int:
    alg = algebra(n, d)
    _check_size(alg, max_dim)
    return max(_ideal_space(alg, generators, pt).rank for pt in _points(d, trials, seed))


def rank_modulo(elements: Sequence[HeckeElement], generators: Sequence[HeckeElement], n: int, d: int, *,
                trials: int = 2, seed: int = 0, max_dim: int = 2000) -> int:
    """Rank of the images of ``elements`` in H(n,d) / (generators)."""
    alg = algebra(n, d)
    _check_size(alg, max_dim)
    best = 0
    for pt in _points(d, trials, seed):
        space = _ideal_space(alg, generators, pt)
        r = space.rank
        if elements:
            space.add(np.vstack([_scaled_row(alg, x, pt) for x in elements]))
        best = max(best, space.rank - r)
    return best


def ideal_membership(f: HeckeElement, generators: Sequence[HeckeElement], n: int, d: int, *,
                     trials: int = 2, seed: int = 0, max_dim: int = 2000):
    """Is f in the two-sided ideal generated by ``generators``?

    Decided by rank computations at random points modulo a 31-bit prime; the
    generic answer is the one at which the ideal has maximal dimension.
    """
    alg = algebra(n, d)
    _check_size(alg, max_dim)
    if f.is_zero():
        return True, {"reason": "zero", "algebra_dim": alg.dimension}
    results = []
    for pt in _points(d, trials, seed):
        space = _ideal_space(alg, generators, pt)
        res = space.reduce(_scaled_row(alg, f, pt)[None, :])
        results.append((space.rank, not res.any()))
    top = max(r for r, _ in results)
    member = all(m for r, m in results if r == top)
    witness = {"algebra_dim": alg.dimension, "ideal_dim": top, "quotient_dim": alg.dimension - top,
               "trials": len(results), "agree": len({m for _, m in results}) == 1}
    return member, witness


def _solve(columns: Sequence[Sequence[RationalFn]], rhs: Sequence[RationalFn]):
    """Unique solution of sum_j x_j columns[j] = rhs, or None."""
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [rhs[i]] for i in range(len(rhs))]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(not row[k].is_zero() for row in rows[r:]):
        return None
    x = [RationalFn(0)] * k
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][k]
    return x, len(piv_cols) == k


def sandwich_coefficient(f: HeckeElement, probes: Sequence[HeckeElement]):
    """Exact certificate that f lies in the span of {f p f}.

    Returns ``(coeffs, kappa)`` with integral coefficients satisfying
    sum coeffs[i] * f probes[i] f = kappa * f, scaled to be primitive, or None
    when f is not in that span.
    """
    alg = f.alg
    sand = [f * p * f for p in probes]
    keys = sorted(set(f.num).union(*(s.num for s in sand)), key=alg.key_index.__getitem__)
    cols = [[s.coefficient(k) for k in keys] for s in sand]
    rhs = [f.coefficient(k) for k in keys]
    sol = _solve(cols, rhs)
    if sol is None:
        return None
    x, _unique = sol
    d = alg.d
    den = LaurentPoly(d, 1)
    for c in x:
        den = den * c.den.exact_div(den.gcd(c.den))
    nums = [(c * RationalFn(den)).as_laurent() for c in x]
    g = None
    for c in nums + [den]:
        if not c.is_zero():
            g = c if g is None else g.gcd(c)
    nums = [c.exact_div(g) for c in nums]
    kappa = den.exact_div(g)
    return nums, kappa


# ---------------------------------------------------------------------------
# centres


def _monomial_symmetric(alg: HeckeAlgebra, a: Sequence[int]) -> HeckeElement:
    keys = {(tuple(p), alg.identity) for p in itertools.permutations(a)}
    return HeckeElement(alg, {k: alg.one_poly for k in keys})


def _commutes(x: HeckeElement, y: HeckeElement) -> bool:
    return (x * y - y * x).is_zero()


def center_checks(n: int, d: int) -> dict:
    """Centrality of symmetric X-polynomials and the small-rank centre bases."""
    if n > 3:
        raise SizeLimit("centre checks are limited to n <= 3")
    alg = algebra(n, d)
    gens = [alg.g(i) for i in range(1, n)] + [alg.X(1)]
    mono = []
    for a in itertools.product(range(d), repeat=n):
        if list(a) == sorted(a, reverse=True):
            m = _monomial_symmetric(alg, a)
            mono.append({"exponents": list(a), "central": all(_commutes(m, g) for g in gens)})
    report = {"n": n, "d": d, "monomial_symmetric": mono,
              "all_monomial_central": all(m["central"] for m in mono)}

    h = algebra(2, 2)
    X1, X2, g1 = h.X(1), h.X(2), h.g(1)
    l1, l2 = LaurentPoly.lam(1, 2), LaurentPoly.lam(2, 2)
    basis2 = [h.one(), X1 + X2, X1 * X2, (X1 + X2 - (l1 + l2)) * g1, (X1 * X2 - l1 * l2) * g1]
    hg = [g1, X1]
    rows = [[b.coefficient(k) for k in h.basis_keys] for b in basis2]
    report["basis_22"] = {"central": [all(_commutes(b, g) for g in hg) for b in basis2],
                          "rank": field_rank(rows)}

    h1 = algebra(2, 1)
    s = h1.X(1) + h1.X(2)
    g = h1.g(1)
    report["basis_21"] = {"central": _commutes(s, g) and _commutes(s, h1.X(1)),
                          "equals_l1_1_plus_g1_sq": s == (h1.one() + g * g) * LaurentPoly.lam(1, 1)}
    report["passed"] = (report["all_monomial_central"] and all(report["basis_22"]["central"])
                        and report["basis_22"]["rank"] == 5 and report["basis_21"]["central"]
                        and report["basis_21"]["equals_l1_1_plus_g1_sq"])
    return report


# ---------------------------------------------------------------------------
# walk preidempotents


def _walk_word(w) -> tuple[int, ...]:
    if hasattr(w, "word"):
        return tuple(w.word)
    if isinstance(w, str):
        return tuple(int(c) for c in w)
    return tuple(int(c) for c in w)


def excluded_eigenvalues(w, d: int) -> list[list[LaurentPoly]]:
    """For each step, the X_i-eigenvalues of the other branches off the walk."""
    word = _walk_word(w)
    shape = [[] for _ in range(d)]
    out = []
    for x in word:
        here = []
        for c in range(d):
            rows = shape[c]
            for r in range(len(rows) + 1):
                length = rows[r] if r < len(rows) else 0
                above = rows[r - 1] if r > 0 else None
                if above is not None and above <= length:
                    continue
                if c == x - 1 and r == 0:
                    continue
                here.append(LaurentPoly.lam(c + 1, d) * LaurentPoly.q(d, 2 * (length - r)))
        out.append(here)
        rows = shape[x - 1]
        if rows:
            rows[0] += 1
        else:
            rows.append(1)
    return out


def walk_eigenvalues(w, d: int) -> list[LaurentPoly]:
    word = _walk_word(w)
    seen = [0] * d
    out = []
    for x in word:
        out.append(LaurentPoly.lam(x, d) * LaurentPoly.q(d, 2 * seen[x - 1]))
        seen[x - 1] += 1
    return out


def walk_preidempotent(w, d: int, n: int | None = None) -> HeckeElement:
    """Product over steps i of (X_i - c) for every excluded branch eigenvalue c."""
    word = _walk_word(w)
    n = n or len(word)
    alg = algebra(n, d)
    out = alg.one()
    for i, vals in enumerate(excluded_eigenvalues(word, d), start=1):
        xi = alg.X(i)
        for c in vals:
            out = (xi - c) * out
    return out


# ---------------------------------------------------------------------------
# the conjectured basis of the quotient


def _crossings(w: tuple, label: str = "value") -> list[tuple[int, int]]:
    n = len(w)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if w[i] > w[j]]
    if label == "value":
        return [(w[j], w[i]) for i, j in pairs]
    return pairs


def _colourings(n: int, d: int, edges: Sequence[tuple[int, int]]) -> Iterable[tuple[int, ...]]:
    adj = [[] for _ in range(n)]
    for i, j in edges:
        lo, hi = min(i, j), max(i, j)
        adj[hi].append(lo)
    a = [0] * n

    def rec(k):
        if k == n:
            yield tuple(a)
            return
        for c in range(d):
            if all(a[m] != c for m in adj[k]):
                a[k] = c
                yield from rec(k + 1)

    return rec(0)


def conjectured_basis_enumerate(n: int, d: int, label: str = "value") -> list[HeckeWord]:
    """Words X^a g_w with a_i != a_j whenever strands i and j cross in w."""
    perms = sorted(itertools.permutations(range(n)), key=lambda w: (_length(w), _reduced_word(w)))
    out = []
    for w in perms:
        word = _reduced_word(w)
        for a in _colourings(n, d, _crossings(w, label)):
            out.append(HeckeWord(a, word))
    return out


def conjectured_basis_count(n: int, d: int) -> int:
    total = 0
    for w in itertools.permutations(range(n)):
        total += sum(1 for _ in _colourings(n, d, _crossings(w)))
    return total


# ---------------------------------------------------------------------------
# Young symmetrizer products


def kappa(nu: Sequence[int], d: int = 0) -> LaurentPoly:
    """Poincare polynomial sum_{w in S_nu} q^(2 l(w)) of the Young subgroup."""
    out = LaurentPoly(d, 1)
    for b in nu:
        for k in range(1, b + 1):
            out = out * sum((LaurentPoly.q(d, 2 * t) for t in range(k)), LaurentPoly(d))
    return out


def kappa_by_rewriting(mu: Sequence[int], nu: Sequence[int]) -> LaurentPoly:
    """The scalar with e_mu e_nu = kappa e_mu, from the rewriting engine."""
    from .errors import RelationFailure

    n = sum(mu)
    if sum(nu) != n:
        raise ValueError("mu and nu must have the same size")
    alg = algebra(n, 1)
    em = young_symmetrizer(alg, list(mu))
    en = young_symmetrizer(alg, list(nu))
    prod = em * en
    key = ((0,) * n, alg.identity)
    k = prod.coefficient(key) / em.coefficient(key)
    if not (prod - em.scale(k)).is_zero():
        raise RelationFailure("e_mu e_nu is not a multiple of e_mu")
    terms = {(e[0],): c for e, c in k.as_laurent().terms.items()}
    return LaurentPoly.from_terms(terms, 0)
