"""Exact arithmetic in Z[q, q^-1, l1..ld], its fraction field, and specialized fields.

Multivariate polynomial arithmetic is delegated to FLINT (``fmpz_mpoly``).  A
Laurent polynomial is stored as ``p * q**s`` with ``p`` an honest polynomial not
divisible by ``q``; this keeps every representation canonical.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint

from .errors import (
    InadmissibleSpecialization,
    InexactDivision,
    PoleAtSpecialization,
    ZeroDenominator,
)

__all__ = [
    "LaurentPoly",
    "RationalFn",
    "Specialization",
    "CycloNumber",
    "quantum_integer",
    "quantum_factorial",
    "specialize",
    "vanishes_under",
    "poly_context",
    "field_rank",
    "cyclo_rank",
    "realify",
]


@lru_cache(maxsize=None)
def poly_context(d: int):
    names = ("q",) + tuple(f"l{i}" for i in range(1, d + 1))
    return flint.fmpz_mpoly_ctx.get(names, "lex")


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, (int, flint.fmpz)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


def _fmpq(x) -> flint.fmpq:
    f = _to_fraction(x)
    return flint.fmpq(f.numerator, f.denominator)


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Element of Z[q, q^-1, l1, ..., ld]; immutable."""

    __slots__ = ("d", "_p", "_s")

    def __init__(self, d: int, poly=None, shift: int = 0):
        ctx = poly_context(d)
        if poly is None:
            poly = ctx.from_dict({})
        elif isinstance(poly, int):
            poly = ctx.from_dict({(0,) * (d + 1): poly}) if poly else ctx.from_dict({})
        object.__setattr__(self, "d", d)
        if poly.is_zero():
            object.__setattr__(self, "_p", poly)
            object.__setattr__(self, "_s", 0)
            return
        v = int(poly.term_content().degrees()[0])
        if v:
            poly = poly // ctx.gens()[0] ** v
        object.__setattr__(self, "_p", poly)
        object.__setattr__(self, "_s", int(shift) + v)

    def __setattr__(self, key, value):
        raise AttributeError("LaurentPoly is immutable")

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c: int, d: int = 0) -> "LaurentPoly":
        return cls(d, int(c))

    @classmethod
    def q(cls, d: int = 0, power: int = 1) -> "LaurentPoly":
        return cls(d, 1, power)

    @classmethod
    def lam(cls, i: int, d: int) -> "LaurentPoly":
        if not 1 <= i <= d:
            raise ValueError(f"lambda index {i} out of range for d={d}")
        return cls(d, poly_context(d).gens()[i])

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, int], d: int) -> "LaurentPoly":
        if not terms:
            return cls(d)
        lo = min(e[0] for e in terms)
        shifted = {}
        for e, c in terms.items():
            if len(e) != d + 1:
                raise ValueError("exponent vector has wrong length")
            if any(x < 0 for x in e[1:]):
                raise ValueError("lambda exponents must be non-negative")
            if c:
                shifted[(e[0] - lo,) + tuple(e[1:])] = int(c)
        return cls(d, poly_context(d).from_dict(shifted), lo)

    @classmethod
    def parse(cls, text: str, d: int) -> "LaurentPoly":
        value = _parse_expr(text, d)
        if isinstance(value, RationalFn):
            return value.as_laurent()
        return value

    # views ----------------------------------------------------------------
    @property
    def terms(self) -> dict:
        s = self._s
        return {(e[0] + s,) + e[1:]: c for e, c in self._iter_terms()}

    def _iter_terms(self):
        for e, c in self._p.terms():
            yield tuple(int(v) for v in e), int(c)

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self):
        return not self._p.is_zero()

    def is_unit(self) -> bool:
        """True for +-q^k, the units of the ring."""
        return self._p.is_constant() and abs(int(self._p.leading_coefficient())) == 1

    def lifted(self, d: int) -> "LaurentPoly":
        if d == self.d:
            return self
        if d < self.d:
            raise ValueError("cannot drop lambda variables")
        pad = (0,) * (d - self.d)
        poly = poly_context(d).from_dict({e + pad: c for e, c in self._iter_terms()})
        return LaurentPoly(d, poly, self._s)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            d = max(self.d, other.d)
            return self.lifted(d), other.lifted(d)
        if isinstance(other, (int, flint.fmpz)):
            return self, LaurentPoly(self.d, int(other))
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        s = min(a._s, b._s)
        qg = poly_context(a.d).gens()[0]
        return LaurentPoly(a.d, a._p * qg ** (a._s - s) + b._p * qg ** (b._s - s), s)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.d, -self._p, self._s)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return LaurentPoly(a.d, a._p * b._p, a._s + b._s)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise InexactDivision("only units have negative powers")
            c = int(self._p.leading_coefficient())
            return LaurentPoly(self.d, c ** (-k), self._s * k)
        return LaurentPoly(self.d, self._p ** k, self._s * k)

    def exact_div(self, other) -> "LaurentPoly":
        pair = self._coerce(other)
        if pair is None:
            raise TypeError("unsupported operand")
        a, b = pair
        if b.is_zero():
            raise ZeroDenominator("division by zero")
        quo, rem = divmod(a._p, b._p)
        if not rem.is_zero():
            raise InexactDivision(f"{b} does not divide {a}")
        return LaurentPoly(a.d, quo, a._s - b._s)

    def __truediv__(self, other):
        return self.exact_div(other)

    def divides(self, other: "LaurentPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        a, b = other._coerce(self)
        return divmod(a._p, b._p)[1].is_zero()

    def gcd(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self._coerce(other)
        return LaurentPoly(a.d, a._p.gcd(b._p))

    def __eq__(self, other):
        pair = self._coerce(other) if isinstance(other, (LaurentPoly, int, flint.fmpz)) else None
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._s == b._s and a._p == b._p

    def __hash__(self):
        return hash((self._s, str(self._p)))

    # substitutions ----------------------------------------------------------
    def bar_t(self) -> "LaurentPoly":
        """The involution q -> -q^-1, fixing every lambda."""
        out = {}
        for e, c in self._iter_terms():
            k = e[0] + self._s
            out[(-k,) + tuple(e[1:])] = -c if k % 2 else c
        return LaurentPoly.from_terms(out, self.d)

    def cycle_lambdas(self, k: int = 1) -> "LaurentPoly":
        """The shift l_i -> l_{i+k} (indices mod d)."""
        d = self.d
        if d == 0 or k % d == 0:
            return self
        out = {}
        for e, c in self._iter_terms():
            lam = [0] * d
            for i in range(d):
                lam[(i + k) % d] = e[1 + i]
            out[(e[0] + self._s,) + tuple(lam)] = c
        return LaurentPoly.from_terms(out, d)

    def evaluate(self, qval, lamvals: Sequence = ()):
        """Evaluate in any field whose elements support +, *, and ** with negative exponents."""
        if self.is_zero():
            return qval * 0
        total = None
        cache = {}
        for e, c in self._iter_terms():
            term = c
            k = e[0] + self._s
            if k:
                if k not in cache:
                    cache[k] = qval ** k
                term = cache[k] * term
            for i, ex in enumerate(e[1:]):
                if ex:
                    term = term * lamvals[i] ** ex
            total = term if total is None else total + term
        if isinstance(total, int):
            total = qval * 0 + total
        return total

    def q_degrees(self) -> tuple[int, int]:
        ts = [e[0] + self._s for e, _ in self._iter_terms()]
        return min(ts), max(ts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r}, d={self.d})"

    def __str__(self):
        return _format_terms(sorted(self.terms.items(), reverse=True), self.d)


def _format_monomial(e: tuple) -> str:
    parts = []
    if e[0]:
        parts.append("q" if e[0] == 1 else f"q^{e[0]}")
    for i, x in enumerate(e[1:], start=1):
        if x:
            parts.append(f"l{i}" if x == 1 else f"l{i}^{x}")
    return "*".join(parts)


def _format_terms(items, d) -> str:
    if not items:
        return "0"
    out = []
    for idx, (e, c) in enumerate(items):
        mono = _format_monomial(e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# rational functions


class RationalFn:
    """Element of the fraction field; canonical after construction."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = LaurentPoly(0, num)
        if den is None:
            den = LaurentPoly(num.d, 1)
        elif isinstance(den, int):
            den = LaurentPoly(num.d, den)
        num, den = num._coerce(den)
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        d = num.d
        if num.is_zero():
            object.__setattr__(self, "num", LaurentPoly(d))
            object.__setattr__(self, "den", LaurentPoly(d, 1))
            return
        g = num._p.gcd(den._p)
        pn = num._p // g
        pd = den._p // g
        if pd.leading_coefficient() < 0:
            pn, pd = -pn, -pd
        object.__setattr__(self, "num", LaurentPoly(d, pn, num._s - den._s))
        object.__setattr__(self, "den", LaurentPoly(d, pd, 0))

    def __setattr__(self, key, value):
        raise AttributeError("RationalFn is immutable")

    @property
    def d(self):
        return self.num.d

    @classmethod
    def parse(cls, text: str, d: int) -> "RationalFn":
        v = _parse_expr(text, d)
        return v if isinstance(v, RationalFn) else cls(v)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_unit()

    def as_laurent(self) -> LaurentPoly:
        if not self.den.is_unit():
            raise InexactDivision(f"{self} is not a Laurent polynomial")
        return self.num.exact_div(self.den)

    @staticmethod
    def _lift(x):
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, (LaurentPoly, int)):
            return RationalFn(x)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDenominator("division by zero")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFn(1) / (self ** (-k))
        return RationalFn(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def bar_t(self):
        return RationalFn(self.num.bar_t(), self.den.bar_t())

    def cycle_lambdas(self, k: int = 1):
        return RationalFn(self.num.cycle_lambdas(k), self.den.cycle_lambdas(k))

    def evaluate(self, qval, lamvals=()):
        den = self.den.evaluate(qval, lamvals)
        if den == 0:
            raise PoleAtSpecialization(f"denominator {self.den} vanishes")
        return self.num.evaluate(qval, lamvals) / den

    def __repr__(self):
        return f"RationalFn({str(self)!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


# ---------------------------------------------------------------------------
# polynomial-string parsing


def _parse_expr(text: str, d: int):
    tree = ast.parse(text.replace("^", "**").replace("λ", "l"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return LaurentPoly(d, node.value)
        if isinstance(node, ast.Name):
            if node.id == "q":
                return LaurentPoly.q(d)
            if node.id.startswith("l") and node.id[1:].isdigit():
                return LaurentPoly.lam(int(node.id[1:]), d)
            raise ValueError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = ev(node.left)
                k = _int_literal(node.right)
                if k < 0 and isinstance(base, LaurentPoly) and not base.is_unit():
                    return RationalFn(base) ** k
                return base ** k
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return _promote_sum(a, b, 1)
            if isinstance(node.op, ast.Sub):
                return _promote_sum(a, b, -1)
            if isinstance(node.op, ast.Mult):
                if isinstance(a, RationalFn) or isinstance(b, RationalFn):
                    return RationalFn._lift(a) * RationalFn._lift(b)
                return a * b
            if isinstance(node.op, ast.Div):
                return RationalFn._lift(a) / RationalFn._lift(b)
        raise ValueError(f"unsupported syntax in {text!r}")

    def _int_literal(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -_int_literal(node.operand)
        raise ValueError("exponents must be integer literals")

    def _promote_sum(a, b, sign):
        if isinstance(a, RationalFn) or isinstance(b, RationalFn):
            a, b = RationalFn._lift(a), RationalFn._lift(b)
        return a + b if sign > 0 else a - b

    return ev(tree)


# ---------------------------------------------------------------------------
# quantum integers


def quantum_integer(n: int, d: int = 0) -> LaurentPoly:
    """Balanced quantum integer [n]; [-n] = -[n]."""
    if n < 0:
        return -quantum_integer(-n, d)
    if n == 0:
        return LaurentPoly(d)
    return LaurentPoly.from_terms({(n - 1 - 2 * k,) + (0,) * d: 1 for k in range(n)}, d)


def quantum_factorial(n: int, d: int = 0) -> LaurentPoly:
    out = LaurentPoly(d, 1)
    for k in range(1, n + 1):
        out = out * quantum_integer(k, d)
    return out


# ---------------------------------------------------------------------------
# cyclotomic numbers


@lru_cache(maxsize=None)
def _cyclotomic(l: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(l).coeffs())


class CycloNumber:
    """Element of Q[q]/Phi_l (l >= 2) or of Q(q) (l == 0)."""

    __slots__ = ("l", "_n", "_d")

    def __init__(self, l: int, num=None, den=None):
        if l == 1 or l < 0:
            raise ValueError("l must be 0 or at least 2")
        object.__setattr__(self, "l", l)
        if num is None:
            num = flint.fmpq_poly([])
        elif not isinstance(num, flint.fmpq_poly):
            num = flint.fmpq_poly([_fmpq(num)])
        if l:
            if den is not None:
                raise ValueError("use division for cyclotomic fractions")
            object.__setattr__(self, "_n", num % _cyclotomic(l) if num.degree() >= _phi(l) else num)
            object.__setattr__(self, "_d", None)
            return
        if den is None:
            den = flint.fmpq_poly([1])
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        g = num.gcd(den)
        if not g.is_one():
            num, den = num // g, den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        object.__setattr__(self, "_n", num)
        object.__setattr__(self, "_d", den)

    def __setattr__(self, key, value):
        raise AttributeError("CycloNumber is immutable")

    @classmethod
    def gen(cls, l: int) -> "CycloNumber":
        return cls(l, flint.fmpq_poly([0, 1]))

    @classmethod
    def from_exponents(cls, coeffs: Mapping[int, Fraction], l: int) -> "CycloNumber":
        """Build sum c_e q^e from a sparse exponent map (negative exponents allowed)."""
        if not coeffs:
            return cls(l)
        if l:
            vec = [flint.fmpq(0)] * l
            for e, c in coeffs.items():
                vec[e % l] += _fmpq(c)
            return cls(l, flint.fmpq_poly(vec))
        lo = min(0, min(coeffs))
        hi = max(coeffs)
        vec = [flint.fmpq(0)] * (hi - lo + 1)
        for e, c in coeffs.items():
            vec[e - lo] += _fmpq(c)
        den = flint.fmpq_poly([0] * (-lo) + [1])
        return cls(0, flint.fmpq_poly(vec), den)

    @property
    def coeffs(self) -> list[Fraction]:
        """Power-basis coordinates (l >= 2), padded to length phi(l)."""
        if not self.l:
            raise ValueError("no finite power basis for Q(q)")
        c = [_to_fraction(x) for x in self._n.coeffs()]
        return c + [Fraction(0)] * (_phi(self.l) - len(c))

    @property
    def numerator(self):
        return self._n

    @property
    def denominator(self):
        return self._d if self._d is not None else flint.fmpq_poly([1])

    def is_zero(self):
        return self._n.is_zero()

    def __bool__(self):
        return not self._n.is_zero()

    def _other(self, x):
        if isinstance(x, CycloNumber):
            if x.l != self.l:
                raise ValueError("mixing different cyclotomic fields")
            return x
        if isinstance(x, (int, Fraction, flint.fmpz, flint.fmpq)):
            return CycloNumber(self.l, x)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.l:
            return CycloNumber(self.l, self._n + o._n)
        return CycloNumber(0, self._n * o._d + o._n * self._d, self._d * o._d)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.l, -self._n, self._d)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.l:
            return CycloNumber(self.l, self._n * o._n)
        return CycloNumber(0, self._n * o._n, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDenominator("inverse of zero")
        if self.l:
            g, s, _ = self._n.xgcd(_cyclotomic(self.l))
            return CycloNumber(self.l, s / g.leading_coefficient())
        return CycloNumber(0, self._d, self._n)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNumber(self.l, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._other(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        if self.l:
            return self._n == o._n
        return self._n * o._d == o._n * self._d

    def __hash__(self):
        return hash((self.l, str(self._n), str(self._d)))

    def to_complex(self, root: complex | None = None) -> complex:
        """Numerical value with q the principal primitive root (or a supplied value)."""
        import cmath

        if root is None:
            if not self.l:
                raise ValueError("supply a value for q")
            root = cmath.exp(2j * cmath.pi / self.l)
        num = sum(float(_to_fraction(c)) * root ** i for i, c in enumerate(self._n.coeffs()))
        if self._d is None:
            return complex(num)
        den = sum(float(_to_fraction(c)) * root ** i for i, c in enumerate(self._d.coeffs()))
        return complex(num / den)

    def __repr__(self):
        return f"CycloNumber({self}, l={self.l})"

    def __str__(self):
        s = str(self._n).replace("x", "q")
        if self._d is not None and not self._d.is_one():
            return f"({s})/({str(self._d).replace('x', 'q')})"
        return s


@lru_cache(maxsize=None)
def _phi(l: int) -> int:
    return flint.fmpz_poly.cyclotomic(l).degree()


# ---------------------------------------------------------------------------
# specializations


@dataclass(frozen=True)
class Specialization:
    """q -> primitive l-th root of unity (l = 0: generic q); l_i -> r_i q^{c_i}."""

    d: int
    l: int = 0
    lam: tuple = ()

    def __post_init__(self):
        if self.l == 1 or self.l < 0:
            raise InadmissibleSpecialization("l must be 0 or at least 2")
        lam = tuple((_to_fraction(r), int(c)) for r, c in self.lam)
        if len(lam) != self.d:
            raise InadmissibleSpecialization(f"need {self.d} lambda assignments, got {len(lam)}")
        if any(r == 0 for r, _ in lam):
            raise InadmissibleSpecialization("lambda_i -> 0 is excluded")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def generic_lambdas(cls, d: int, l: int = 0, scalars: Sequence | None = None):
        scalars = scalars or [Fraction(p) for p in (2, 3, 5, 7, 11, 13, 17, 19)[:d]]
        return cls(d, l, tuple((s, 0) for s in scalars))

    @property
    def admissible(self) -> bool:
        vals = [self.lambda_value(i) for i in range(1, self.d + 1)]
        return len(set(vals)) == len(vals)

    def q_value(self) -> CycloNumber:
        return CycloNumber.gen(self.l)

    def lambda_value(self, i: int) -> CycloNumber:
        r, c = self.lam[i - 1]
        return CycloNumber.from_exponents({c: r}, self.l)

    def lambda_values(self) -> list[CycloNumber]:
        return [self.lambda_value(i) for i in range(1, self.d + 1)]

    def to_json(self) -> str:
        return json.dumps(
            {"d": self.d, "l": self.l, "lambda": [{"scalar": str(r), "qexp": c} for r, c in self.lam]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, data) -> "Specialization":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["d"]), int(data.get("l", 0)),
                   tuple((Fraction(x["scalar"]), int(x["qexp"])) for x in data["lambda"]))


def _specialize_laurent(x: LaurentPoly, k: Specialization) -> CycloNumber:
    if x.d > k.d:
        raise InadmissibleSpecialization("specialization has too few lambda assignments")
    acc: dict[int, Fraction] = {}
    lam = k.lam
    for e, c in x._iter_terms():
        ex = e[0] + x._s
        coeff = Fraction(c)
        for i, p in enumerate(e[1:]):
            if p:
                r, ci = lam[i]
                coeff *= r ** p
                ex += ci * p
        acc[ex] = acc.get(ex, Fraction(0)) + coeff
    return CycloNumber.from_exponents({e: c for e, c in acc.items() if c}, k.l)


def specialize(x, k: Specialization) -> CycloNumber:
    """Image of x in the field determined by k."""
    if isinstance(x, int):
        return CycloNumber(k.l, x)
    if isinstance(x, LaurentPoly):
        return _specialize_laurent(x, k)
    if isinstance(x, RationalFn):
        den = _specialize_laurent(x.den, k)
        if den.is_zero():
            raise PoleAtSpecialization(f"denominator {x.den} vanishes under the specialization")
        return _specialize_laurent(x.num, k) / den
    raise TypeError(f"cannot specialize {type(x).__name__}")


def vanishes_under(x, k: Specialization) -> bool:
    if isinstance(x, int):
        return x == 0
    return specialize(x, k).is_zero()


# ---------------------------------------------------------------------------
# linear algebra over exact fields


def field_rank(rows: Sequence[Sequence]) -> int:
    """Rank by Gaussian elimination; entries from any exact field."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col] if not isinstance(m[rank][col], CycloNumber) else m[rank][col].inverse()
        prow = [v * inv for v in m[rank]]
        m[rank] = prow
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], prow)]
        rank += 1
        if rank == len(m):
            break
    return rank


def _mult_block(a: CycloNumber, phi: int) -> list[list[flint.fmpq]]:
    mod = _cyclotomic(a.l)
    cols = []
    cur = a._n
    x = flint.fmpq_poly([0, 1])
    for j in range(phi):
        c = list(cur.coeffs()) + [flint.fmpq(0)] * (phi - len(cur.coeffs()))
        cols.append(c)
        cur = (cur * x) % mod
    return [[cols[j][i] for j in range(phi)] for i in range(phi)]


def realify(rows: Sequence[Sequence[CycloNumber]], l: int) -> flint.fmpq_mat:
    """Q-matrix of a Q(zeta_l)-matrix in the power basis; rank scales by phi(l)."""
    phi = _phi(l)
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    flat = [flint.fmpq(0)] * (nr * phi * nc * phi)
    width = nc * phi
    for i, row in enumerate(rows):
        for j, a in enumerate(row):
            if isinstance(a, CycloNumber):
                if a.is_zero():
                    continue
                blk = _mult_block(a, phi)
            else:
                v = _fmpq(a)
                if v == 0:
                    continue
                blk = [[v if r == c else flint.fmpq(0) for c in range(phi)] for r in range(phi)]
            for r in range(phi):
                base = (i * phi + r) * width + j * phi
                for c in range(phi):
                    flat[base + c] = blk[r][c]
    return flint.fmpq_mat(nr * phi, width, flat)


def cyclo_rank(rows: Sequence[Sequence[CycloNumber]], l: int) -> int:
    if not rows or not rows[0]:
        return 0
    if l == 0:
        return field_rank(rows)
    phi = _phi(l)
    r = realify(rows, l).rank()
    assert r % phi == 0
    return r // phi


def euler_phi(l: int) -> int:
    return _phi(l)
