import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blobkit.blob import (
    BlobDiagram,
    BlobParams,
    BlobStandard,
    blob_basis,
    blob_dimension,
    blob_multiply,
    decomposition_oracle,
    generator,
    gram,
    lin_add,
    pascal_report,
    phi_iso_check,
    standard_weights,
)
from blobkit.errors import NotCritical, ParameterConstraintViolated
from blobkit.hecke import conjectured_basis_count
from blobkit.ring import field_rank

P = BlobParams.at(Fraction(5, 3), 3)


def one(d):
    return {d: P.one}


@pytest.mark.parametrize("n", range(0, 7))
def test_dimension_is_central_binomial(n):
    assert blob_dimension(n) == comb(2 * n, n)


@pytest.mark.parametrize("n", range(1, 6))
def test_dimension_matches_basis_count(n):
    assert blob_dimension(n) == conjectured_basis_count(n, 2)


def test_small_dimensions():
    assert blob_dimension(1) == 2
    assert blob_dimension(2) == 6


def test_local_relations():
    n = 3
    U1, U2, e = generator("U1", n), generator("U2", n), generator("e", n)
    assert blob_multiply(U1, U1, P) == {U1: P.delta}
    assert P.delta == -(P.q + 1 / P.q)
    ye = -P.qint(2) / P.qint(3)  # -[m-1]/[m] at m = 3
    assert blob_multiply(blob_multiply(U1, e, P), U1, P) == {U1: ye}
    assert blob_multiply(blob_multiply(U1, U2, P), U1, P) == one(U1)
    assert blob_multiply(e, e, P) == one(e)
    assert blob_multiply(e, U2, P) == blob_multiply(U2, e, P)


basis4 = blob_basis(4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(basis4), st.sampled_from(basis4), st.sampled_from(basis4))
def test_associativity(x, y, z):
    left = blob_multiply(blob_multiply(x, y, P), z, P)
    right = blob_multiply(x, blob_multiply(y, z, P), P)
    assert left == right


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(basis4), st.sampled_from(basis4))
def test_reflection_is_an_antiautomorphism(x, y):
    assert x.reflect().reflect() == x
    xy = blob_multiply(x, y, P)
    rev = blob_multiply(y.reflect(), x.reflect(), P)
    assert {d.reflect(): c for d, c in xy.items()} == rev


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0 * P.one) for j in range(len(b[0]))] for i in range(len(a))]


def _action(std, comb_):
    n = std.dimension
    out = [[0 * P.one] * n for _ in range(n)]
    for d, c in comb_.items():
        m = std.action(d, P)
        out = [[out[i][j] + c * m[i][j] for j in range(n)] for i in range(n)]
    return out


@pytest.mark.parametrize("weight", standard_weights(4))
def test_standard_is_a_representation(weight):
    std = BlobStandard(4, weight)
    assert std.dimension == comb(4, (4 - abs(weight)) // 2)
    rng = random.Random(weight)
    for _ in range(15):
        x, y = rng.choice(basis4), rng.choice(basis4)
        assert _action(std, blob_multiply(x, y, P)) == _matmul(std.action(x, P), std.action(y, P))


@pytest.mark.parametrize("weight", standard_weights(4))
def test_gram_is_contravariant(weight):
    std = BlobStandard(4, weight)
    G = gram(std, P)
    for x in basis4[::7]:
        A = std.action(x, P)
        At = [list(r) for r in zip(*A)]
        assert _matmul(At, G) == _matmul(G, std.action(x.reflect(), P))


def test_gram_examples():
    assert gram(BlobStandard(3, 3), P) == [[P.one]]
    G = gram(BlobStandard(2, 0))  # generic symbolic q and Q
    gp = BlobParams.generic()
    det = G[0][0] * G[1][1] - G[0][1] * G[1][0]
    # hand computation: y_e (-[2] - y_e) = [m-1][m+1] / [m]^2
    assert det == gp.qm(-1) * gp.qm(1) / (gp.qm(0) * gp.qm(0))


def test_gram_generic_full_rank():
    rng = random.Random(5)
    for _ in range(3):
        # Q independent of q: no integral alcove walls
        q = Fraction(rng.randint(2, 9), rng.randint(11, 19))
        params = BlobParams(q, Fraction(rng.randint(20, 40), 7), None, q / q)
        for n in range(1, 8):
            for w in standard_weights(n):
                G = gram(BlobStandard(n, w), params)
                assert field_rank(G) == len(G)


def test_gram_rank_drop_at_critical_point():
    G = gram(BlobStandard(2, 0), BlobParams.generic_q(-1))
    assert field_rank(G) == 1


def test_decomposition_identity_cases():
    res = decomposition_oracle(5, None, None)
    assert res.square() == [[int(i == j) for j in range(len(res.weights))] for i in range(len(res.weights))]
    res = decomposition_oracle(2, 5, 2)  # every weight stays inside the fundamental alcove
    assert res.square() == [[int(i == j) for j in range(len(res.weights))] for i in range(len(res.weights))]
    with pytest.raises(NotCritical):
        decomposition_oracle(3, 3, 3)


def test_decomposition_frozen_example():
    res = decomposition_oracle(6, 4, 1)
    assert res.certified
    assert res.weights == [-6, -4, -2, 0, 2, 4, 6]
    assert res.square() == [
        [1, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 1],
        [1, 1, 0, 0, 1, 1, 0],
        [1, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ]
    # dimension count: standards are sums of simples
    for mu in res.weights:
        dim = comb(6, (6 - abs(mu)) // 2)
        assert dim == sum(k * res.simple_dims[lam] for lam, k in res.matrix[mu].items())


def _tl_dim(n, w):
    k = (n - w) // 2
    return comb(n, k) - (comb(n, k - 1) if k else 0)


def test_pascal_heads_m_minus_one_are_tl():
    for row in pascal_report(7, -1):
        if row["weight"] <= 0:
            assert row["head"] == _tl_dim(row["n"], -row["weight"])
    n3 = {r["weight"]: r["head"] for r in pascal_report(3, -1) if r["n"] == 3}
    assert n3 == {-3: 1, -1: 2, 1: 3, 3: 1}


def test_pascal_heads_m_minus_two_are_tl_one_level_up():
    for row in pascal_report(7, -2):
        if row["weight"] < 2:
            assert row["head"] == _tl_dim(row["n"] + 1, 1 - row["weight"])
    n3 = [r["head"] for r in pascal_report(3, -2) if r["n"] == 3]
    assert sorted(n3[:3]) == [1, 2, 3]
    assert pascal_report(0, -2)[0]["factors"] == [{"weight": 0, "dim": 1}]


def test_phi_relations():
    rng = random.Random(8)
    for _ in range(4):
        q = Fraction(rng.randint(2, 30), rng.randint(31, 60))
        rep = phi_iso_check(3, q, rng.choice([-3, -2, 2, 4]))
        assert rep.passed, rep.failures()
    with pytest.raises(ParameterConstraintViolated):
        phi_iso_check(3, Fraction(2), 0)


def test_phi_rejects_root_of_unity_qm_zero():
    with pytest.raises(ParameterConstraintViolated):
        phi_iso_check(2, BlobParams.root_of_unity(3, 1).q, 3)


def test_lin_add_and_diagram_validation():
    e = BlobDiagram.blob(2)
    assert lin_add((P.one, {e: P.one}), (-P.one, {e: P.one})) == {}
    with pytest.raises(ValueError):
        BlobDiagram.from_chords(2, 2, [(0, 2), (1, 3)])
