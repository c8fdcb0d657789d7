"""One test per acceptance criterion; each records a PASS/FAIL line for the run summary."""

import itertools
import math
import random
import time
from fractions import Fraction
from math import comb, factorial

import pytest

from blobkit.alcove import decomposition_prediction
from blobkit.blob import BlobParams, BlobStandard, decomposition_oracle, gram, phi_iso_check
from blobkit.errors import PoleAtSpecialization
from blobkit.hecke import (
    HeckeElement,
    IdempotentSpec,
    algebra,
    build_idempotent,
    conjectured_basis_count,
    conjectured_basis_enumerate,
    ideal_membership,
    preidempotent,
    rank_modulo,
    sandwich_coefficient,
    verify_idempotent,
)
from blobkit.linkage import blob_specialization, induced_group, linkage_classes, same_walk_orbit
from blobkit.ring import LaurentPoly, RationalFn, Specialization, field_rank, quantum_factorial
from blobkit.tensor import (
    RhoParams,
    deformed_n3_residual,
    fmb_blob_parameter,
    rho_relations,
    rho_rep,
    rst_check,
    twist_spectrum,
)
from blobkit.walks import (
    Hyperplane,
    Walk,
    effective_touches,
    hyperplane_closure,
    lambda_of_walk,
    reflect_walk,
    walk_orbit,
)
from conftest import CRITERIA


class PowerOfTwoViolated(AssertionError):
    pass


def record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    CRITERIA[k] = line
    print(line)


def lam(i, d):
    return LaurentPoly.lam(i, d)


def qq(d, e=1):
    return LaurentPoly.q(d, e)


# 1 ---------------------------------------------------------------------------


def _printed_forms():
    out = {}
    one2 = RationalFn(LaurentPoly(2, 1))
    l1, l2 = lam(1, 2), lam(2, 2)
    A1 = algebra(1, 2)
    out["E(+,2,1)"] = build_idempotent(IdempotentSpec(1, 2, 1, 2)) == (A1.X(1) - A1.one() * l1).scale(one2 / RationalFn(l2 - l1))
    A = algebra(2, 2)
    X, X2, g1 = A.X(1), A.X(2), A.g(1)
    qi = qq(2, -1)
    E = build_idempotent(IdempotentSpec(-1, 2, 2, 2))
    a = (X - A.one() * l1).scale(one2 / RationalFn(l2 - l1))
    mid = (A.one() * (-l1) + g1 * X * g1 * (qi * qi) - g1 * (qi * (l2 - l1))).scale(
        one2 / RationalFn((1 + qi * qi) * (qi * qi * l2 - l1)))
    S = X + X2 - A.one() * (l1 + l2)
    P = X * X2 - A.one() * (l1 * l2)
    fac = ((S * (-l1) + P) * (A.one() - g1 * qi)).scale(one2 / RationalFn((l2 - l1) * (qi * qi * l2 - l1) * (1 + qi * qi)))
    out["E(-,2,2) product"] = a * mid * a == E
    out["E(-,2,2) central"] = fac == E
    d = 3
    L = [None] + [lam(i, d) for i in (1, 2, 3)]
    q = qq(d)
    one3 = RationalFn(LaurentPoly(d, 1))
    P1 = (L[1] - L[2]) * (L[1] - L[3])
    P2 = q * (q + qq(d, -1)) * (q * q * L[1] - L[2]) * (q * q * L[1] - L[3])
    B1 = algebra(1, d)
    f1 = B1.X(1) * B1.X(1) - B1.X(1) * (L[2] + L[3]) + B1.one() * (L[2] * L[3])
    out["E(+,1,1) d=3"] = build_idempotent(IdempotentSpec(1, 1, 1, d)) == f1.scale(one3 / RationalFn(P1))
    B = algebra(2, d)

    def f(x):
        return x * x - x * (L[2] + L[3]) + B.one() * (L[2] * L[3])

    E12 = build_idempotent(IdempotentSpec(1, 1, 2, d))
    out["E(+,1,2) d=3"] = E12 == (f(B.X(1)) * f(B.X(2)) * (B.g(1) + B.one() * qq(d, -1))).scale(RationalFn(q) / RationalFn(P1 * P2))
    return out


def test_criterion_1_idempotents():
    t = time.time()
    bad = []
    total = 0
    for d in (2, 3):
        for n in (1, 2, 3, 4):
            for l in range(1, d + 1):
                for s in (1, -1):
                    spec = IdempotentSpec(s, l, n, d)
                    total += 1
                    if not verify_idempotent(build_idempotent(spec), spec).passed:
                        bad.append(spec.label)
    forms = _printed_forms()
    elapsed = time.time() - t
    ok = not bad and all(forms.values()) and elapsed < 60
    record(1, ok, f"{total - len(bad)}/{total} idempotents verified; printed forms "
                  f"{sum(forms.values())}/{len(forms)} match; {elapsed:.1f}s")
    assert ok, (bad, forms)


# 2 ---------------------------------------------------------------------------


def test_criterion_2_soergel_vs_gram():
    t = time.time()
    mismatches = []
    cases = 0
    for l, m in [(3, 1), (4, 1), (5, 2)]:
        for n in range(0, 9):
            regular, mat, _ = decomposition_prediction(n, l, m)
            res = decomposition_oracle(n, l, m)
            pred = [[mat[mu][lam_] for lam_ in regular] for mu in regular]
            got = res.restrict(regular).square()
            cases += 1
            if pred != got or not res.certified:
                mismatches.append((l, m, n))
    elapsed = time.time() - t
    ok = not mismatches and elapsed < 600
    record(2, ok, f"{cases - len(mismatches)}/{cases} (l,m,n) cases agree; {elapsed:.1f}s")
    assert ok, mismatches


# 3 ---------------------------------------------------------------------------


CRIT3_SPECS = [
    Specialization(2, 0, ((1, 0), (1, 2))),
    Specialization(3, 0, ((1, 4), (1, 2), (1, 0))),
    blob_specialization(3, 1),
    Specialization(3, 6, ((1, 0), (2, 1), (1, 3))),
    Specialization(2, 8, ((1, 1), (1, -1))),
]


def _random_orbit_cases(count, seed=2024):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 7)
        w = Walk(tuple(rng.randint(1, 3) for _ in range(n)))
        gens = []
        for _ in range(rng.randint(1, 2)):
            i, j = rng.sample([1, 2, 3], 2)
            gens.append(Hyperplane(i, j, rng.choice([-3, -2, -1, 1, 2, 3])))
        hs = hyperplane_closure(gens, 3, max(n, 3))
        if all(h.x != 0 for h in hs):
            out.append((w, gens, hs))
    return out


@pytest.mark.xfail(raises=PowerOfTwoViolated, strict=True,
                   reason="orbit sizes are not powers of two where several walls meet at a walk vertex")
def test_criterion_3_walks_and_linkage():
    d = 3
    L = [None] + [lam(i, d) for i in (1, 2, 3)]
    seq = lambda_of_walk("3331312").as_laurent(d)
    printed = [L[3], qq(d, 2) * L[3], qq(d, 4) * L[3], L[1], qq(d, 6) * L[3], qq(d, 2) * L[1], L[2]]
    lam_ok = seq == printed
    refl_ok = (reflect_walk("333", Hyperplane(3, 1, 2), 2) == Walk("331")
               and reflect_walk("331", Hyperplane(3, 2, 1), 1) == Walk("321"))

    pairs = 0
    mism = 0
    for k in CRIT3_SPECS:
        G = induced_group(k, bound=8)
        for n in range(1, 7):
            words = [Walk(w) for w in itertools.product(range(1, k.d + 1), repeat=n)]
            for w in words:
                orbit = walk_orbit(w, G.generators, bound=8)
                for v in words:
                    pairs += 1
                    mism += same_walk_orbit(w, v, G) != (v in orbit)
    link_ok = mism == 0

    cases = _random_orbit_cases(500)
    pow2 = 0
    for w, gens, hs in cases:
        t = sum(len(effective_touches(w, h)) for h in hs)
        pow2 += len(walk_orbit(w, gens)) == 2 ** t
    pow_ok = pow2 == len(cases)

    ok = lam_ok and refl_ok and link_ok and pow_ok
    record(3, ok, f"lambda sequence {'ok' if lam_ok else 'differs'}; reflections {'ok' if refl_ok else 'differ'}; "
                  f"divisibility = orbit on {pairs - mism}/{pairs} pairs; orbit size = 2^t on {pow2}/{len(cases)}")
    assert lam_ok and refl_ok and link_ok
    if not pow_ok:
        raise PowerOfTwoViolated(f"{len(cases) - pow2} of {len(cases)} orbits are not of size 2^t")


# 4 ---------------------------------------------------------------------------


def test_criterion_4_degeneration():
    k = Specialization(2, 0, ((1, 0), (1, 2)))
    poles = []
    for s, l in ((-1, 2), (1, 1)):
        try:
            build_idempotent(IdempotentSpec(s, l, 2, 2), at=k)
            poles.append(False)
        except PoleAtSpecialization:
            poles.append(True)
    classes = [[str(m) for m in c] for c in linkage_classes(2, 2, k, "all")]
    linked = ["((),(1^2))", "((1),(1))", "((2),())"] in classes
    # lambda_2 = q^2 lambda_1 is blob parameter m = -1 with generic q
    G = gram(BlobStandard(2, 0), BlobParams.generic_q(-1))
    drop = len(G) - field_rank(G)
    dim_L2 = BlobStandard(2, 2).dimension
    ok = all(poles) and linked and drop == dim_L2 == 1
    record(4, ok, f"poles {poles}; class {'linked' if linked else 'missing'}; Gram rank drop {drop} (dim L(2) = {dim_L2})")
    assert ok


# 5 ---------------------------------------------------------------------------


def test_criterion_5_blob_identification():
    from blobkit.blob import random_rational_q

    rng = random.Random(55)
    phi_ok = 0
    for _ in range(20):
        q = random_rational_q(rng)
        m = rng.choice([-4, -3, -2, 2, 3, 4, 5])
        phi_ok += phi_iso_check(3, q, m).passed

    d = 2
    A = algebra(3, d)
    q = qq(d)
    l1, l2 = lam(1, d), lam(2, d)
    u1, u2 = A.g(1) - A.one() * q, A.g(2) - A.one() * q
    f = u1 * u2 * u1 - u1
    gens = [preidempotent(build_idempotent(IdempotentSpec(-1, l, 2, d)))[0].embed(3) for l in (1, 2)]
    member, _ = ideal_membership(f, gens, 3, d)
    S = A.X(1) + A.X(2) - A.one() * (l1 + l2)
    P = A.X(1) * A.X(2) - A.one() * (l1 * l2)
    _, kap = sandwich_coefficient(f, [S, P, A.X(1) * A.g(1) * A.g(2) * S])
    # homogeneous lambda form of [3]! q^-2 l1 l2 (q - q^-1)^2 [m+1][m-1]
    target = quantum_factorial(3, d) * qq(d, -2) * (l1 * l1 + l2 * l2 - (qq(d, 2) + qq(d, -2)) * l1 * l2)
    ratio = RationalFn(kap) / RationalFn(target)
    unit = ratio.is_polynomial() and ratio.as_laurent().is_unit()
    # second route: at l1 = q^m, l2 = q^-m compare with the m-form at rational q
    m_ok = True
    for mm in (-3, 2, 5):
        for qv in (Fraction(3, 2), Fraction(5, 7)):
            qint = lambda k: (qv ** k - qv ** -k) / (qv - 1 / qv)
            form = (qint(1) * qint(2) * qint(3)) * qv ** -2 * (qv - 1 / qv) ** 2 * qint(mm + 1) * qint(mm - 1)
            kv = kap.evaluate(qv, [qv ** mm, qv ** -mm])
            uv = (ratio.as_laurent().evaluate(qv, [1, 1]) if unit else None)
            m_ok &= unit and kv == uv * form
    ok = phi_ok == 20 and member and unit and m_ok
    record(5, ok, f"phi relations {phi_ok}/20; u1u2u1-u1 in ideal: {member}; obstruction / target is a unit: {unit}; "
                  f"m-form evaluation {'agrees' if m_ok else 'differs'}")
    assert ok


# 6 ---------------------------------------------------------------------------


LISTED = {2: [2, -2], 3: [0, 0, -6], 4: [0, 0, -4, -4, -4, -12], 5: [-4] * 5 + [-10] * 4 + [-20]}


def test_criterion_6_tensor():
    spectra_ok = all(
        sorted((-e for e, c in twist_spectrum(n).items() for _ in range(c)), reverse=True) == LISTED[n]
        for n in LISTED
    )
    fmb = fmb_blob_parameter(2, (), 3)
    fmb_ok = fmb.m_blob == -2 and all(v == 0 for v in fmb.relations.values())

    rng = random.Random(6)
    worst = 0.0
    for _ in range(20):
        P = RhoParams(rng.uniform(0.02, 0.98), rng.choice([-4, -3, -2, -1, 1, 2, 3, 4]))
        for n in (2, 3, 4):
            res = rho_relations(rho_rep(P, n), n, P.values()[0], P.m)
            worst = max(worst, max(res.values()))
    exact_ok = True
    for muq, m in [(Fraction(2, 7), 3), (Fraction(3, 11), -2), (Fraction(1, 5), 2)]:
        P = RhoParams(muq, m)
        for n in (2, 3, 4):
            exact_ok &= all(v == 0 for v in rho_relations(rho_rep(P, n), n, P.values()[0], m).values())

    rng = random.Random(7)
    rnd = lambda: Fraction(rng.choice([-1, 1]) * rng.randint(1, 40), rng.randint(1, 40))
    rst_ok = sum(rst_check(rnd(), rnd(), rnd(), rnd()) for _ in range(50))

    ok = spectra_ok and fmb_ok and worst < 1e-10 and exact_ok and rst_ok == 50
    record(6, ok, f"C_2..C_5 spectra {'match' if spectra_ok else 'differ'}; blob parameter {fmb.m_blob}; "
                  f"float residual max {worst:.1e}; cyclotomic exact {exact_ok}; rst {rst_ok}/50")
    assert ok


# 7 ---------------------------------------------------------------------------


def _compositions(n, d):
    for cuts in itertools.combinations(range(n + d - 1), d - 1):
        parts, prev = [], -1
        for c in cuts + (n + d - 1,):
            parts.append(c - prev - 1)
            prev = c
        yield parts


def _multinomial(a):
    out = factorial(sum(a))
    for x in a:
        out //= factorial(x)
    return out


def test_criterion_7_basis_count():
    d2 = all(conjectured_basis_count(n, 2) == comb(2 * n, n) for n in range(1, 9))
    d3 = all(conjectured_basis_count(n, 3) == sum(_multinomial(a) ** 2 for a in _compositions(n, 3)) for n in range(1, 7))
    indep = True
    for d in (2, 3):
        for n in (1, 2, 3):
            A = algebra(n, d)
            if n >= 2:
                gens = [preidempotent(build_idempotent(IdempotentSpec(-1, l, 2, d)))[0].embed(n) for l in range(1, d + 1)]
            else:
                gens = []
            words = [HeckeElement(A, {w.key: A.one_poly}) for w in conjectured_basis_enumerate(n, d)]
            indep &= rank_modulo(words, gens, n, d) == len(words) if gens else len(words) == d
    ok = d2 and d3 and indep
    record(7, ok, f"d=2 central binomials {d2}; d=3 multinomial squares {d3}; independent modulo the ideal {indep}")
    assert ok


# 8 ---------------------------------------------------------------------------


def test_criterion_8_deformed_map():
    q = Fraction(3, 2)
    diag = deformed_n3_residual(q, q, q).is_zero()
    off = [deformed_n3_residual(q, r, s).is_zero() for r, s in
           [(Fraction(5, 3), Fraction(7, 4)), (q, Fraction(7, 4)), (Fraction(7, 4), q), (Fraction(2, 5), Fraction(9, 7))]]
    ok = diag and not any(off)
    record(8, ok, f"zero at q=r=s: {diag}; nonzero off the diagonal in {off.count(False)}/{len(off)} cases")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-rx"]))
