import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F7, F13, trace_zero, weyl_elems
from nilsum.certificate import CommutatorWitness
from nilsum.core import QQ, WEYL, Matrix, MatrixRing, PrimeField, WeylElem
from nilsum.core.weyl import D, X
from nilsum.errors import InfeasibleError, ScalarMatrixError, WitnessMismatchError
from nilsum.witnesses import (require_witness, split_k_commutators, trace_zero_witness, weyl_oracle, witness_check,
                              zero_diagonal_similarity)

M2Q = MatrixRing(2, QQ)


def test_witness_check_examples():
    assert witness_check(CommutatorWitness(WEYL, ((X, X),), WEYL.zero()))
    assert witness_check(CommutatorWitness(WEYL, ((D, X),), WEYL.one()))
    e12 = Matrix.of(QQ, [[0, 1], [0, 0]])
    e21 = Matrix.of(QQ, [[0, 0], [1, 0]])
    assert witness_check(CommutatorWitness(M2Q, ((e12, e21),), Matrix.of(QQ, [[1, 0], [0, -1]])))
    assert not witness_check(CommutatorWitness(M2Q, ((e21, e12),), Matrix.of(QQ, [[1, 0], [0, -1]])))


def test_require_witness_mismatch():
    w = CommutatorWitness(WEYL, ((D, X),), WEYL.one())
    require_witness(w, WEYL.one(), k=1)
    with pytest.raises(WitnessMismatchError):
        require_witness(w, WEYL.zero())
    with pytest.raises(WitnessMismatchError):
        require_witness(w, WEYL.one(), k=2)


def test_zero_diagonal_similarity_examples():
    J = Matrix.of(QQ, [[0, 1], [0, 0]])
    assert zero_diagonal_similarity(J) == Matrix.identity(QQ, 2)
    M = Matrix.of(QQ, [[1, 0], [0, -1]])
    S = zero_diagonal_similarity(M)
    assert (S * M * S.inverse()).has_zero_diagonal()
    with pytest.raises(ScalarMatrixError):
        zero_diagonal_similarity(Matrix.identity(QQ, 2))


@pytest.mark.parametrize("field", [QQ, F7, F13])
def test_zero_diagonal_similarity_random(field, rng):
    for n in range(2, 7):
        M = trace_zero(field, n, rng)
        if M.is_scalar():
            continue
        S = zero_diagonal_similarity(M)
        assert (S * M * S.inverse()).has_zero_diagonal()


def test_zero_diagonal_similarity_hard_cases():
    # diagonal matrices defeat the unit-vector candidates at the first step
    for diag in ([1, 2, -3], [1, 1, -2], [5, -5, 0, 0]):
        M = Matrix.diagonal(QQ, [Fraction(v) for v in diag])
        S = zero_diagonal_similarity(M)
        assert (S * M * S.inverse()).has_zero_diagonal()


def test_trace_zero_witness_examples():
    zero = Matrix.zeros(QQ, 2)
    w = trace_zero_witness(zero)
    assert w.pairs == ((zero, zero),)
    M = Matrix.of(QQ, [[1, 0], [0, -1]])
    (x, y), = trace_zero_witness(M).pairs
    assert x * y - y * x == M
    with pytest.raises(InfeasibleError):
        trace_zero_witness(Matrix.identity(QQ, 2))


@pytest.mark.parametrize("field", [QQ, F13])
@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_trace_zero_witness_random(field, n, rng):
    for _ in range(3):
        M = trace_zero(field, n, rng)
        w = trace_zero_witness(M)
        assert witness_check(w) and w.target == M


def test_trace_zero_witness_small_field_gate():
    M = trace_zero(PrimeField(3), 4, random.Random(0))
    with pytest.raises(InfeasibleError):
        trace_zero_witness(M)


@given(weyl_elems(max_degree=4))
def test_oracle_witness(s):
    w = weyl_oracle().witness(s)
    assert witness_check(w)


def test_split_examples():
    w = split_k_commutators(Fraction(0), 2, QQ)
    assert w.pairs == ((0, 0), (0, 0))
    t = X * D
    w = split_k_commutators(t, 1, WEYL)
    assert w.pairs == ((D, WeylElem.monomial(2, 1, Fraction(1, 2))),)
    with pytest.raises(InfeasibleError):
        split_k_commutators(Fraction(5), 3, QQ)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_split_k_pairs(k, rng):
    for ring, t in ((WEYL, WEYL.random(rng)), (MatrixRing(3, F13), trace_zero(F13, 3, rng)),
                    (MatrixRing(2, QQ), trace_zero(QQ, 2, rng))):
        w = split_k_commutators(t, k, ring, seed=k)
        assert w.k == k and witness_check(w) and w.target == t


def test_split_rejects_nonzero_scalar_trace():
    t = Matrix.identity(QQ, 2)
    with pytest.raises(InfeasibleError):
        split_k_commutators(t, 2, MatrixRing(2, QQ))


def test_witness_json_round_trip(rng):
    w = split_k_commutators(trace_zero(F7, 3, rng), 2, MatrixRing(3, F7), seed=3)
    assert CommutatorWitness.from_json(w.to_json()) == w


def test_trace_zero_round_trip_200():
    rng = random.Random(200)
    fields = (QQ, F13, PrimeField(17))
    for i in range(200):
        field = fields[i % 3]
        M = trace_zero(field, rng.randint(2, 6), rng)
        if M.is_scalar() and not M.is_zero():
            continue
        (x, y), = trace_zero_witness(M).pairs
        assert x * y - y * x == M


def test_preimage_200():
    rng = random.Random(7)
    for _ in range(200):
        s = WEYL.random(rng)
        g = weyl_oracle()(s)
        assert D * g - g * D == s


def test_f2_commutators_by_enumeration():
    from itertools import product
    F2 = PrimeField(2)
    mats = [Matrix(F2, [list(v[:2]), list(v[2:])]) for v in product(F2.elements(), repeat=4)]
    commutators = {x * y - y * x for x in mats for y in mats}
    trace_free = {m for m in mats if not m.trace()}
    accepted, rejected = set(), set()
    for m in trace_free:
        try:
            (x, y), = trace_zero_witness(m).pairs
        except InfeasibleError:
            rejected.add(m)
            continue
        assert x * y - y * x == m
        accepted.add(m)
    assert accepted <= commutators
    # I_2 has trace 0 in characteristic 2 and is a commutator, but the scalar path declines it
    assert rejected == {Matrix.identity(F2, 2)}
    assert commutators == trace_free
