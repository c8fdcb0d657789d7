from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blobkit.errors import InadmissibleSpecialization, InexactDivision, PoleAtSpecialization
from blobkit.ring import (
    CycloNumber,
    LaurentPoly,
    RationalFn,
    Specialization,
    cyclo_rank,
    field_rank,
    quantum_factorial,
    quantum_integer,
    specialize,
    vanishes_under,
)

D = 2
q = LaurentPoly.q(D)
qi = LaurentPoly.q(D, -1)
l1, l2 = LaurentPoly.lam(1, D), LaurentPoly.lam(2, D)


@st.composite
def laurent(draw, d=D, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = (draw(st.integers(-4, 4)),) + tuple(draw(st.integers(0, 2)) for _ in range(d))
        terms[e] = draw(st.integers(-5, 5))
    return LaurentPoly.from_terms(terms, d)


def nonzero(p):
    return not p.is_zero()


def test_trivial_identities():
    assert (q + qi) * (q - qi) == LaurentPoly.q(D, 2) - LaurentPoly.q(D, -2)
    assert RationalFn(l1 - l2, l1 - l2) == RationalFn(LaurentPoly.const(1, D))
    assert (l1 * l1 - l2 * l2).exact_div(l1 - l2) == l1 + l2


def test_exact_div_rejects_remainder():
    with pytest.raises(InexactDivision):
        (l1 + 1).exact_div(l1 - l2)


def test_quantum_integers():
    assert quantum_integer(2) == LaurentPoly.q(0) + LaurentPoly.q(0, -1)
    assert quantum_integer(1) == LaurentPoly.const(1)
    assert quantum_integer(0).is_zero()
    assert quantum_integer(-3) == -quantum_integer(3)
    assert quantum_factorial(3) == quantum_integer(2) * quantum_integer(3)


@given(st.integers(-8, 8))
def test_quantum_integer_recursion(n):
    two = quantum_integer(2)
    assert two * quantum_integer(n) == quantum_integer(n + 1) + quantum_integer(n - 1)
    assert quantum_integer(n).evaluate(1) == n


@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert (a - a).is_zero()


@given(laurent(), laurent().filter(nonzero))
def test_exact_div_inverts_multiplication(a, b):
    assert (a * b).exact_div(b) == a
    assert b.divides(a * b)


@given(laurent())
def test_parse_round_trip(a):
    assert LaurentPoly.parse(str(a), D) == a


@given(laurent(), laurent().filter(nonzero), laurent().filter(nonzero))
def test_fraction_field(a, b, c):
    x = RationalFn(a, b)
    y = RationalFn(c)
    assert (x + y) - y == x
    assert (x * y) / y == x
    assert RationalFn.parse(str(x), D) == x


@given(laurent(), st.fractions(1, 5).filter(lambda v: v != 0), st.fractions(1, 5), st.fractions(1, 5))
def test_evaluate_is_a_homomorphism(a, qv, x1, x2):
    b = a * a + l1
    assert (a * b).evaluate(qv, [x1, x2]) == a.evaluate(qv, [x1, x2]) * b.evaluate(qv, [x1, x2])


def test_bar_t_and_cycle():
    assert (q * l1).bar_t() == -qi * l1
    assert (l1 - q * l2).cycle_lambdas() == l2 - q * l1


# cyclotomic fields -----------------------------------------------------------


def test_qint_vanishes_at_root():
    k = Specialization(0, 10, ())
    assert specialize(quantum_integer(5), k).is_zero()
    z = CycloNumber.gen(10)
    assert z ** 10 == CycloNumber(10, 1)
    assert z ** 5 == CycloNumber(10, -1)


@given(st.integers(2, 30), st.lists(st.fractions(-3, 3), min_size=1, max_size=6))
def test_cyclo_field_inverse(l, coeffs):
    if l == 2:
        l = 3
    x = CycloNumber.from_exponents(dict(enumerate(coeffs)), l)
    if x.is_zero():
        return
    assert x * x.inverse() == CycloNumber(l, 1)
    assert abs(x.to_complex() * x.inverse().to_complex() - 1) < 1e-8


@given(st.integers(3, 24), st.integers(-10, 10), st.integers(-10, 10))
def test_cyclo_matches_complex(l, a, b):
    z = CycloNumber.gen(l)
    x = z ** a + CycloNumber(l, 2) * z ** b
    import cmath

    w = cmath.exp(2j * cmath.pi / l)
    assert abs(x.to_complex() - (w ** a + 2 * w ** b)) < 1e-9


def test_specialization_examples():
    k = Specialization(2, 0, ((1, 0), (1, 2)))
    assert vanishes_under(l1 - LaurentPoly.q(D, -2) * l2, k)
    assert vanishes_under(l2 - LaurentPoly.q(D, 2) * l1, k)
    assert not vanishes_under(l1 - l2, Specialization.generic_lambdas(2))
    assert vanishes_under(0, k)
    with pytest.raises(PoleAtSpecialization):
        specialize(RationalFn(LaurentPoly.const(1, D), l1 - l2), Specialization(2, 0, ((1, 0), (1, 0))))


def test_specialization_validation_and_json():
    k = Specialization(3, 6, ((1, 0), (Fraction(2, 3), 1), (1, 3)))
    assert Specialization.from_json(k.to_json()) == k
    with pytest.raises(InadmissibleSpecialization):
        Specialization(2, 1, ((1, 0), (1, 0)))
    with pytest.raises(InadmissibleSpecialization):
        Specialization(2, 0, ((1, 0),))
    assert not Specialization(2, 0, ((1, 1), (1, 1))).admissible


@settings(max_examples=30)
@given(laurent(), laurent(), st.integers(3, 12), st.integers(-3, 3), st.integers(-3, 3))
def test_specialize_is_a_homomorphism(a, b, l, c1, c2):
    k = Specialization(2, l, ((1, c1), (2, c2)))
    assert specialize(a * b, k) == specialize(a, k) * specialize(b, k)
    assert specialize(a + b, k) == specialize(a, k) + specialize(b, k)


def test_ranks_two_routes():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)], [Fraction(0), Fraction(1), Fraction(1)]]
    assert field_rank(rows) == 2
    z = CycloNumber.gen(8)
    one = CycloNumber(8, 1)
    m = [[one, z], [z, z * z], [z * z, z ** 3]]
    assert cyclo_rank(m, 8) == 1 == field_rank(m)
