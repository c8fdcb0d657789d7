"""Tensor-space representations: M^q_N, pure twists, B-type maps and the rho representations.

Matrices are sparse (row -> {col: value}) over whatever field the entries
live in: Fraction, CycloNumber, LaurentPoly/RationalFn or complex.  Basis
vectors of V_N^n are digit strings, strand 1 most significant.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import flint

from .errors import ParameterConstraintViolated, RelationFailure
from .ring import CycloNumber, LaurentPoly, RationalFn

__all__ = [
    "SparseMatrix",
    "TensorRep",
    "RhoParams",
    "mq_local",
    "calU_local",
    "build_MqN",
    "charge",
    "charge_sectors",
    "sector_structure",
    "braid_elements",
    "twist_spectrum",
    "f_mb_rep",
    "fmb_blob_parameter",
    "image_algebra_dimension",
    "rho_rep",
    "rho_relations",
    "rst_check",
    "cabling_maps",
    "deformed_n3_residual",
    "b_relations",
]


# ---------------------------------------------------------------------------
# sparse matrices


def _is_zero(v) -> bool:
    if isinstance(v, complex):
        return v == 0
    return v == 0


class SparseMatrix:
    __slots__ = ("dim", "rows")

    def __init__(self, dim: int, rows: dict | None = None):
        self.dim = dim
        self.rows = rows or {}

    @classmethod
    def identity(cls, dim: int, one=1) -> "SparseMatrix":
        return cls(dim, {i: {i: one} for i in range(dim)})

    @classmethod
    def from_dense(cls, mat) -> "SparseMatrix":
        rows = {}
        for i, r in enumerate(mat):
            d = {j: v for j, v in enumerate(r) if not _is_zero(v)}
            if d:
                rows[i] = d
        return cls(len(mat), rows)

    def _clean(self):
        self.rows = {i: r for i, r in ((i, {j: v for j, v in r.items() if not _is_zero(v)}) for i, r in self.rows.items()) if r}
        return self

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        out = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc: dict = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    if j in acc:
                        acc[j] = acc[j] + a * b
                    else:
                        acc[j] = a * b
            if acc:
                out[i] = acc
        return SparseMatrix(self.dim, out)._clean()

    def __mul__(self, c) -> "SparseMatrix":
        return SparseMatrix(self.dim, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})._clean()

    __rmul__ = __mul__

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt[j] + v if j in tgt else v
        return SparseMatrix(self.dim, rows)._clean()

    def __neg__(self):
        return SparseMatrix(self.dim, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and (self - other).is_zero()

    def max_abs(self) -> float:
        return max((abs(complex(v)) for r in self.rows.values() for v in r.values()), default=0.0)

    def transpose(self) -> "SparseMatrix":
        out: dict = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                out.setdefault(j, {})[i] = v
        return SparseMatrix(self.dim, out)

    def restrict(self, idx: Sequence[int]) -> list[list]:
        """Dense block on the given basis indices (entries outside the block are ignored)."""
        pos = {g: k for k, g in enumerate(idx)}
        out = [[0] * len(idx) for _ in idx]
        for g in idx:
            for j, v in self.rows.get(g, {}).items():
                if j in pos:
                    out[pos[g]][pos[j]] = v
        return out

    def entries(self):
        for i, r in self.rows.items():
            for j, v in r.items():
                yield i, j, v

    def power(self, k: int, one=1) -> "SparseMatrix":
        out = SparseMatrix.identity(self.dim, one)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out


def residual(m: SparseMatrix):
    """0 for an exact zero; a float norm for floating entries; None when exact and nonzero."""
    if m.is_zero():
        return 0
    vals = [v for _, _, v in m.entries()]
    if all(isinstance(v, (complex, float)) for v in vals):
        return m.max_abs()
    return None


# ---------------------------------------------------------------------------
# local matrices and tensor operators


def _inv(x):
    if isinstance(x, LaurentPoly):
        return LaurentPoly(x.d, 1).exact_div(x)
    return 1 / x


def mq_local(N: int, q) -> list[list]:
    """The N^2 x N^2 local matrix of g: q on aa; for a < b, ab->ab is q - 1/q, ab<->ba is -1."""
    zero = q * 0
    size = N * N
    m = [[zero] * size for _ in range(size)]
    qi = _inv(q)
    for a in range(N):
        m[a * N + a][a * N + a] = q
        for b in range(a + 1, N):
            ab, ba = a * N + b, b * N + a
            m[ab][ab] = q - qi
            m[ab][ba] = zero - 1
            m[ba][ab] = zero - 1
    return m


def calU_local(r, x=None) -> list[list]:
    """Local U^r(x) on basis 00, 01, 10, 11; the corner x sits on 00."""
    zero = r * 0
    x = zero if x is None else x
    return [
        [x, zero, zero, zero],
        [zero, r, zero + 1, zero],
        [zero, zero + 1, _inv(r), zero],
        [zero, zero, zero, zero],
    ]


def local_operator(local: Sequence[Sequence], i: int, n: int, N: int) -> SparseMatrix:
    """Act by `local` on strands i, i+1 (1-based) of V_N^n."""
    if not 1 <= i < n:
        raise ValueError(f"strand pair {i},{i + 1} outside 1..{n}")
    dim = N ** n
    hi = N ** (n - i - 1)
    rows = {}
    for idx in range(dim):
        a = (idx // (hi * N)) % N
        b = (idx // hi) % N
        base = idx - (a * N + b) * hi
        row = {}
        for c in range(N):
            for d in range(N):
                v = local[a * N + b][c * N + d]
                if not _is_zero(v):
                    row[base + (c * N + d) * hi] = v
        if row:
            rows[idx] = row
    return SparseMatrix(dim, rows)


def charge(idx: int, n: int, N: int = 2) -> int:
    """Number of strands in state 0."""
    c = 0
    for _ in range(n):
        c += idx % N == 0
        idx //= N
    return c


@dataclass
class TensorRep:
    N: int
    n: int
    images: dict
    one: object = 1
    backend: str = "exact"

    @property
    def dim(self) -> int:
        return self.N ** self.n

    def identity(self) -> SparseMatrix:
        return SparseMatrix.identity(self.dim, self.one)

    def word(self, letters: Sequence) -> SparseMatrix:
        out = self.identity()
        for x in letters:
            out = out @ self.images[x]
        return out

    def charge_conserved(self) -> bool:
        return all(
            charge(i, self.n, self.N) == charge(j, self.n, self.N)
            for m in self.images.values()
            for i, j, _ in m.entries()
        )


def _one_of(q):
    return q / q


def build_MqN(N: int, n: int, q) -> TensorRep:
    loc = mq_local(N, q)
    images = {i: local_operator(loc, i, n, N) for i in range(1, n)}
    one = _one_of(q)
    return TensorRep(N, n, images, one, "float" if isinstance(q, complex) else "exact")


def g_inverse(g: SparseMatrix, q) -> SparseMatrix:
    """g^{-1} = g - (q - 1/q) from the quadratic relation."""
    return g - SparseMatrix.identity(g.dim, _one_of(q)) * (q - _inv(q))


def charge_sectors(rep: TensorRep) -> dict[int, list[int]]:
    if rep.N != 2:
        raise ValueError("charge sectors are defined for N = 2")
    out: dict = {}
    for i in range(rep.dim):
        out.setdefault(charge(i, rep.n), []).append(i)
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# pure braids


@dataclass
class BraidElements:
    L: list
    C: SparseMatrix
    G: SparseMatrix


def braid_elements(rep: TensorRep) -> BraidElements:
    """L_1 = 1, L_{i+1} = g_i L_i g_i; C_n = prod L_i; G = g_1 ... g_{n-1}."""
    L = [rep.identity()]
    for i in range(1, rep.n):
        g = rep.images[i]
        L.append(g @ L[-1] @ g)
    C = rep.identity()
    for x in L:
        C = C @ x
    G = rep.word(range(1, rep.n))
    return BraidElements(L, C, G)


def _bareiss_det(mat):
    """Fraction-free determinant over a polynomial ring with exact division."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = None
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return a[0][0] * 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                if prev is not None:
                    t, rem = divmod(t, prev)
                    assert rem == 0
                a[i][j] = t
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _laurent_to_poly(x: LaurentPoly, ctx, shift: int):
    """q^shift * x as a polynomial in the second generator of ctx."""
    _, qg = ctx.gens()
    out = ctx.from_dict({})
    for e, c in x.terms.items():
        out += c * qg ** (e[0] + shift)
    return out


def twist_spectrum(n: int, which: str = "C", i: int | None = None, sector: int | None = None) -> dict[int, int]:
    """Exact q-exponent multiset of M_2(C_n) (or L_i) on a charge sector, q symbolic.

    The characteristic polynomial is computed over Z[y, q] and peeled into
    linear factors y - q^e; anything left over raises.
    """
    q = LaurentPoly.q(0)
    rep = build_MqN(2, n, q)
    be = braid_elements(rep)
    M = be.C if which == "C" else be.L[(i or n) - 1]
    sector = n // 2 if sector is None else sector
    idx = charge_sectors(rep)[sector]
    block = M.restrict(idx)
    zero = LaurentPoly(0)
    lo = min((v.q_degrees()[0] for r in block for v in r if isinstance(v, LaurentPoly) and not v.is_zero()), default=0)
    shift = max(0, -lo)
    ctx = flint.fmpz_mpoly_ctx.get(("y", "q"), "lex")
    y, qg = ctx.gens()
    k = len(idx)
    mat = []
    for a in range(k):
        row = []
        for b in range(k):
            v = block[a][b]
            v = v if isinstance(v, LaurentPoly) else zero + v
            p = -_laurent_to_poly(v, ctx, shift)
            if a == b:
                p += y
            row.append(p)
        mat.append(row)
    cp = _bareiss_det(mat)
    out: dict = {}
    bound = 4 * n * n + shift + 4
    for e in range(-bound, bound + 1):
        if e + shift < 0:
            continue
        f = y - qg ** (e + shift)
        while True:
            quo, rem = divmod(cp, f)
            if rem != 0:
                break
            cp = quo
            out[e] = out.get(e, 0) + 1
    if cp != 1:
        raise ArithmeticError(f"characteristic polynomial has a factor {cp} that is not y - q^e")
    return dict(sorted(out.items()))


def sector_structure(n: int, q=Fraction(3, 2)) -> dict[int, list[int]]:
    """Sizes of the C_n generalized eigenspaces in each charge sector (its T_n summands)."""
    rep = build_MqN(2, n, q)
    C = braid_elements(rep).C
    out = {}
    for c, idx in charge_sectors(rep).items():
        block = C.restrict(idx)
        k = len(idx)
        A = flint.fmpq_mat(k, k, [flint.fmpq(v.numerator, v.denominator) if isinstance(v, Fraction) else flint.fmpq(v) for r in block for v in r])
        sizes = []
        left = k
        for e in range(-4 * n * n, 4 * n * n + 1):
            lam = Fraction(q) ** e
            B = A - flint.fmpq_mat(k, k, [flint.fmpq(lam.numerator, lam.denominator) if a == b else 0 for a in range(k) for b in range(k)])
            P = B ** k
            dim = k - P.rank()
            if dim:
                sizes.append(dim)
                left -= dim
        if left:
            raise ArithmeticError("twist spectrum is not a set of q powers")
        out[c] = sorted(sizes, reverse=True)
    return out


# ---------------------------------------------------------------------------
# B-type braid maps


def _braid_word(rep: TensorRep, word: Sequence[int], q) -> SparseMatrix:
    out = rep.identity()
    for x in word:
        g = rep.images[abs(x)]
        out = out @ (g if x > 0 else g_inverse(g, q))
    return out


def b_relations(images: dict, n: int, one=1) -> dict:
    """Residuals of the type-B braid relations on images of g_0 .. g_{n-1}."""
    out = {}
    if n >= 2:
        g0, g1 = images[0], images[1]
        out["g0 g1 g0 g1 = g1 g0 g1 g0"] = residual(g0 @ g1 @ g0 @ g1 - g1 @ g0 @ g1 @ g0)
    for i in range(2, n):
        out[f"g0 g{i} = g{i} g0"] = residual(images[0] @ images[i] - images[i] @ images[0])
    for i in range(1, n - 1):
        a, b = images[i], images[i + 1]
        out[f"braid {i},{i + 1}"] = residual(a @ b @ a - b @ a @ b)
    for i in range(1, n):
        for j in range(i + 2, n):
            out[f"g{i} g{j} = g{j} g{i}"] = residual(images[i] @ images[j] - images[j] @ images[i])
    return out


def _assert_relations(res: dict):
    bad = [k for k, v in res.items() if v is None or (v and v > 1e-10)]
    if bad:
        raise RelationFailure(f"relations fail: {', '.join(bad)}")


def f_mb_rep(m: int, b: Sequence[int], n: int, q, N: int = 2, check: bool = True) -> tuple[TensorRep, dict]:
    """g_0 -> C_m b, g_i -> g_{i+m-1} on V_N^{n+m-1}; b is a signed word in g_1..g_{m-2}."""
    if m < 1:
        raise ValueError("m must be positive")
    if any(not 1 <= abs(x) <= m - 2 for x in b):
        raise ValueError("b must be a braid on the first m-1 strands")
    strands = n + m - 1
    base = build_MqN(N, strands, q)
    if m == 1:
        g0 = base.identity()
    else:
        sub = TensorRep(N, strands, {i: base.images[i] for i in range(1, m)}, base.one)
        L = [base.identity()]
        for i in range(1, m):
            L.append(sub.images[i] @ L[-1] @ sub.images[i])
        C = base.identity()
        for x in L:
            C = C @ x
        g0 = C @ _braid_word(base, b, q)
    images = {0: g0}
    for i in range(1, n):
        images[i] = base.images[i + m - 1]
    rep = TensorRep(N, strands, images, base.one, base.backend)
    res = b_relations(images, n)
    if check:
        _assert_relations(res)
    return rep, res


def _qint(k: int, q):
    if k < 0:
        return -_qint(-k, q)
    return sum((q ** (k - 1 - 2 * j) for j in range(k)), q * 0)


@dataclass
class FmbBlobReport:
    k_minus: object
    m_blob: int | None
    e_eigenvalue: object
    relations: dict

    def to_dict(self):
        return {
            "k_minus": str(self.k_minus),
            "blob_parameter": self.m_blob,
            "e_eigenvalue": str(self.e_eigenvalue),
            "relations": {k: (str(v) if v is not None else "nonzero") for k, v in self.relations.items()},
        }


def fmb_blob_parameter(m: int = 2, b: Sequence[int] = (), n: int = 3, search: int = 12) -> FmbBlobReport:
    """Solve U_1 e U_1 = k U_1 exactly over Q(q) for M_2 o f^m_b and read off the blob parameter.

    e is the projector onto the larger-exponent eigenvalue of the g_0 image,
    which must have exactly two eigenvalues.
    """
    q = RationalFn(LaurentPoly.q(0))
    rep, res = f_mb_rep(m, b, n, q)
    g0 = rep.images[0]
    one = rep.one
    I = rep.identity()
    exps = sorted(twist_spectrum(m).keys()) if not b else None
    if exps is None or len(exps) > 2:
        raise RelationFailure("g_0 image is not quadratic on the zero-charge sector")
    present = []
    for e in range(-4 * m * m, 4 * m * m + 1):
        lam = q ** e
        if not _nullity_zero(g0 - I * lam, rep):
            present.append(e)
    if len(present) != 2:
        raise RelationFailure(f"g_0 image has eigenvalue exponents {present}, not a quadratic")
    a, c = q ** present[1], q ** present[0]
    if not ((g0 - I * a) @ (g0 - I * c)).is_zero():
        raise RelationFailure("g_0 image is not semisimple with two eigenvalues")
    e_img = (g0 - I * c) * (1 / (a - c))
    U1 = rep.images[1] - I * q
    lhs = U1 @ e_img @ U1
    k = None
    for i, j, v in U1.entries():
        k = lhs.rows.get(i, {}).get(j, 0 * one) / v
        break
    rel = {
        "e e = e": residual(e_img @ e_img - e_img),
        "U1 e U1 = k U1": residual(lhs - U1 * k),
    }
    if n >= 3:
        U2 = rep.images[2] - I * q
        rel["U1 U2 U1 = U1"] = residual(U1 @ U2 @ U1 - U1)
        rel["e U2 = U2 e"] = residual(e_img @ U2 - U2 @ e_img)
    rel.update(res)
    mb = None
    for cand in range(-search, search + 1):
        if cand == 0:
            continue
        if -_qint(cand - 1, q) / _qint(cand, q) == k:
            mb = cand
            break
    return FmbBlobReport(k, mb, a, rel)


def _nullity_zero(M: SparseMatrix, rep: TensorRep) -> bool:
    """True when M is invertible; evaluated at a rational point standing in for generic q."""
    qv = Fraction(7, 5)
    k = M.dim
    vals = []
    for i in range(k):
        r = M.rows.get(i, {})
        for j in range(k):
            v = r.get(j)
            if v is None:
                vals.append(flint.fmpq(0))
            else:
                x = v.evaluate(qv) if hasattr(v, "evaluate") else Fraction(v)
                vals.append(flint.fmpq(x.numerator, x.denominator))
    return flint.fmpq_mat(k, k, vals).rank() == k


def image_algebra_dimension(mats: Sequence[SparseMatrix], limit: int = 10_000) -> int:
    """Dimension of the unital algebra generated by exact rational matrices."""
    if not mats:
        return 1
    dim = mats[0].dim

    def vec(m):
        v = [Fraction(0)] * (dim * dim)
        for i, j, x in m.entries():
            v[i * dim + j] = Fraction(x)
        return v

    basis_rows: list = []
    pivots: list = []

    def reduce(v):
        v = v[:]
        for (p, row) in zip(pivots, basis_rows):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(m):
        v = reduce(vec(m))
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for k, row in enumerate(basis_rows):
            if row[p]:
                f = row[p]
                basis_rows[k] = [a - f * b for a, b in zip(row, v)]
        basis_rows.append(v)
        pivots.append(p)
        return True

    one = SparseMatrix.identity(dim, Fraction(1))
    queue = [one]
    add(one)
    elems = [one]
    while queue:
        x = queue.pop()
        for g in mats:
            y = x @ g
            if add(y):
                elems.append(y)
                queue.append(y)
                if len(elems) > limit:
                    raise RuntimeError("algebra too large")
    return len(basis_rows)


# ---------------------------------------------------------------------------
# rho representations of b_n on V_2^{2n}


@dataclass
class RhoParams:
    """Angles as rational multiples of pi (exact) or floats (radians / pi)."""

    muq: Fraction | float
    m: int
    mur: Fraction | float = field(init=False)
    mus: Fraction | float = field(init=False)
    mut: Fraction | float = field(init=False)

    def __post_init__(self):
        if self.m == 0:
            raise ParameterConstraintViolated("m = 0 is excluded")
        mq = self.muq
        if isinstance(mq, (int, Fraction)):
            mq = Fraction(mq)
            self.muq = mq
            self.mur = self.m * (mq + 1) + Fraction(1, 2)
            self.mus = (mq + 1) / 2 - Fraction(3, 4)
            self.mut = (mq + 1) / 2 + Fraction(3, 4)
        else:
            self.mur = self.m * (mq + 1) + 0.5
            self.mus = (mq + 1) / 2 - 0.75
            self.mut = (mq + 1) / 2 + 0.75
        if self._cos(self.muq) == 1:
            raise ParameterConstraintViolated("q = 1 is excluded")

    @property
    def exact(self) -> bool:
        return isinstance(self.muq, Fraction)

    @staticmethod
    def _cos(x):
        return math.cos(math.pi * float(x))

    def var1_residual(self) -> float:
        return abs(-self._cos(self.muq) - 2 * self._cos(self.mus) * self._cos(self.mut))

    def var2_residual(self) -> float:
        mq, m = math.pi * float(self.muq), self.m
        lhs = -math.sin((m - 1) * mq) / math.sin(m * mq)
        rhs = math.cos(math.pi * float(self.mus + self.mut - self.mur)) / self._cos(self.mur)
        return abs(lhs - rhs)

    def values(self):
        """(q, r, s, t) in a cyclotomic field (exact) or as complex numbers."""
        if self.exact:
            den = math.lcm(*(Fraction(x).denominator for x in (self.muq, self.mur, self.mus, self.mut)))
            L = 2 * den
            z = CycloNumber.gen(L)

            def root(mu):
                k = int(Fraction(mu) * den) % L
                return z ** k

            return root(self.muq), root(self.mur), root(self.mus), root(self.mut)
        return tuple(cmath.exp(1j * math.pi * float(x)) for x in (self.muq, self.mur, self.mus, self.mut))


def rho_rep(params: RhoParams, n: int, variant: str = "rho0", r_override=None) -> TensorRep:
    """Images of e and U_1..U_{n-1} on V_2^{2n} (keys 'e' and integers)."""
    q, r, s, t = params.values()
    if variant == "rhos":
        r = _solve_rhos_r(params) if r_override is None else r_override
    elif variant != "rho0":
        raise ValueError("variant must be rho0 or rhos")
    two_r = r + 1 / r
    if two_r == 0:
        raise ParameterConstraintViolated("[2]_r = 0")
    strands = 2 * n
    x = two_r if variant == "rhos" else None
    e = local_operator(calU_local(r, x), n, strands, 2) * (1 / two_r)
    images = {"e": e}
    Us, Ut = calU_local(s), calU_local(t)
    for i in range(1, n):
        images[i] = local_operator(Us, n - i, strands, 2) @ local_operator(Ut, n + i, strands, 2)
    one = _one_of(q)
    return TensorRep(2, strands, images, one, "exact" if params.exact else "float")


def _solve_rhos_r(params: RhoParams) -> complex:
    """r with (r/a + a/r + b(r + 1/r)) / (r + 1/r) = y_e, where a = st and b = t/s."""
    q, _, s, t = (complex(v.to_complex()) if isinstance(v, CycloNumber) else v for v in params.values())
    a, b = s * t, t / s
    m = params.m
    c = -(_qint(m - 1, q) / _qint(m, q))
    r2 = (c - a - b) / (1 / a + b - c)
    return cmath.sqrt(r2)


def rho_relations(rep: TensorRep, n: int, q, m: int) -> dict:
    """Residuals of every blob relation, plus symmetry of the generator images."""
    I = rep.identity()
    e = rep.images["e"]
    U = {i: rep.images[i] for i in range(1, n)}
    two_q = q + 1 / q
    ye = -(_qint(m - 1, q) / _qint(m, q))
    out = {"e e = e": residual(e @ e - e)}
    for i, u in U.items():
        out[f"U{i} U{i} = -[2] U{i}"] = residual(u @ u + u * two_q)
    for i in range(1, n - 1):
        a, b = U[i], U[i + 1]
        out[f"U{i} U{i + 1} U{i} = U{i}"] = residual(a @ b @ a - a)
        out[f"U{i + 1} U{i} U{i + 1} = U{i + 1}"] = residual(b @ a @ b - b)
    for i in range(1, n):
        for j in range(i + 2, n):
            out[f"U{i} U{j} = U{j} U{i}"] = residual(U[i] @ U[j] - U[j] @ U[i])
    for i in range(2, n):
        out[f"e U{i} = U{i} e"] = residual(e @ U[i] - U[i] @ e)
    if n >= 2:
        out["U1 e U1 = y_e U1"] = residual(U[1] @ e @ U[1] - U[1] * ye)
    for key, mat in rep.images.items():
        out[f"symmetric {key}"] = residual(mat - mat.transpose())
    return out


def rst_check(r, s, t, x) -> bool:
    """(U^s (x) U^t)(1 (x) U^r(x) (x) 1)(U^s (x) U^t) = (r/(st) + st/r + x t/s)(U^s (x) U^t), exactly."""
    A = local_operator(calU_local(s), 1, 4, 2) @ local_operator(calU_local(t), 3, 4, 2)
    B = local_operator(calU_local(r, x), 2, 4, 2)
    c = r / (s * t) + s * t / r + x * t / s
    return (A @ B @ A - A * c).is_zero()


# ---------------------------------------------------------------------------
# cabling maps and the deformed N = 3 variant


def cabling_maps(variant: str, n: int, q, N: int = 2, check: bool = True) -> tuple[TensorRep, dict]:
    base = build_MqN(N, 2 * n, q)
    g = base.images
    images = {}
    if variant == "C":
        images[0] = g[1]
        for i in range(1, n):
            images[i] = g[2 * i] @ g[2 * i - 1] @ g[2 * i + 1] @ g[2 * i]
    elif variant == "S":
        images[0] = g[n]
        for i in range(1, n):
            images[i] = g[n - i] @ g[n + i]
    else:
        raise ValueError("variant must be 'C' or 'S'")
    rep = TensorRep(N, 2 * n, images, base.one, base.backend)
    res = b_relations(images, n)
    if check:
        _assert_relations(res)
    return rep, res


def deformed_n3_residual(q, r, s, n: int = 2) -> SparseMatrix:
    """g_i -> M^q(g_{n-i}) M^r(g_{n+i}), g_0 -> M^s(g_n) on V_3^{2n}; returns g0g1g0g1 - g1g0g1g0."""
    strands = 2 * n
    Mq = mq_local(3, q)
    Mr = mq_local(3, r)
    Ms = mq_local(3, s)
    g0 = local_operator(Ms, n, strands, 3)
    g1 = local_operator(Mq, n - 1, strands, 3) @ local_operator(Mr, n + 1, strands, 3)
    return g0 @ g1 @ g0 @ g1 - g1 @ g0 @ g1 @ g0
