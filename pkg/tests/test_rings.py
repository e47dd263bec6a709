import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F7, F13, fp, fractions, matrices
from nilsum.core import (QQ, Fp, Matrix, MatrixRing, PrimeField, flatten, mat_inverse_commutative, parse_ring,
                         rank, ring_from_json, unflatten)
from nilsum.errors import RingMismatchError, SingularMatrixError


def test_rational_sum():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_rationals_stay_reduced():
    assert QQ.decode("2/4") == Fraction(1, 2)
    assert QQ.encode(Fraction(6, 4)) == {"num": "3", "den": "2"}


@given(fractions, fractions)
def test_rational_ops_exact(a, b):
    assert isinstance(QQ.mul(a, b), Fraction) and QQ.sub(QQ.add(a, b), b) == a


def test_f7_product():
    assert F7.mul(F7.from_int(4), F7.from_int(2)) == F7.one()


def test_fp_mixing_primes_rejected():
    with pytest.raises(RingMismatchError):
        Fp(1, 7) + Fp(1, 13)


def test_ring_check_rejects_foreign_elements():
    with pytest.raises(RingMismatchError):
        F7.add(F7.one(), F13.one())
    with pytest.raises(RingMismatchError):
        QQ.mul(Fraction(1), F7.one())


@pytest.mark.parametrize("p", [2, 3, 5, 13])
def test_field_inverses_by_enumeration(p):
    F = PrimeField(p)
    for a in F.elements():
        if a:
            # brute-force search for the inverse, independent of pow(-1)
            (inv,) = [b for b in F.elements() if int(a) * int(b) % p == 1]
            assert F.inv(a) == inv


def test_non_prime_modulus_rejected():
    with pytest.raises(ValueError):
        PrimeField(9)


def test_cube_roots_of_unity_f7():
    assert [int(r) for r in F7.cube_roots_of_unity()] == [1, 2, 4]
    with pytest.raises(ValueError):
        PrimeField(5).cube_roots_of_unity()


@given(fp(13), fp(13), fp(13))
def test_fp_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == F13.zero()
    if a:
        assert a * a.inverse() == F13.one()


@pytest.mark.parametrize("text,expected", [
    ("Q", QQ), ("QQ", QQ), ("F7", F7), ("F_13", F13), ("GF(5)", PrimeField(5)),
    ("M(2,Q)", MatrixRing(2, QQ)), ("M(2,F5)", MatrixRing(2, PrimeField(5))),
])
def test_parse_ring(text, expected):
    ring = parse_ring(text)
    assert ring == expected
    assert ring_from_json(ring.to_json()) == ring


def test_parse_ring_rejects_junk():
    with pytest.raises(ValueError):
        parse_ring("Z/6")


# matrices -----------------------------------------------------------------


def test_identity_left_unit(rng):
    A = Matrix.random(QQ, 3, rng)
    assert Matrix.identity(QQ, 3) * A == A


@given(matrices(QQ))
def test_additive_inverse(A):
    assert (A + (-A)).is_zero()


@given(matrices(F7, 3), matrices(F7, 3), matrices(F7, 3))
def test_matmul_associative_and_distributive(A, B, C):
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C


def _naive_product(A, B):
    n = A.n
    return [[sum((A[i, t] * B[t, j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


@given(matrices(QQ, 3), matrices(QQ, 3))
def test_rational_kernel_matches_naive_sum(A, B):
    assert [list(r) for r in (A * B).rows] == _naive_product(A, B)


def test_inverse_examples():
    assert Matrix.identity(QQ, 3).inverse() == Matrix.identity(QQ, 3)
    assert Matrix.of(QQ, [[1, 1], [0, 1]]).inverse() == Matrix.of(QQ, [[1, -1], [0, 1]])


def test_random_inverse_f13(rng):
    done = 0
    while done < 5:
        M = Matrix.random(F13, 5, rng)
        if rank([list(r) for r in M.rows], F13) < 5:
            continue
        assert M * mat_inverse_commutative(M) == Matrix.identity(F13, 5)
        done += 1


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        Matrix.of(QQ, [[1, 2], [2, 4]]).inverse()


def test_inverse_needs_field():
    R = MatrixRing(2, QQ)
    with pytest.raises((RingMismatchError, TypeError)):
        Matrix.identity(R, 2).inverse()


def test_scaling_left_and_right():
    A = Matrix.of(F7, [[1, 2], [3, 4]])
    assert A * F7.from_int(2) == Matrix.of(F7, [[2, 4], [6, 1]])
    assert F7.from_int(2) * A == A * F7.from_int(2)


def test_block_and_embed():
    A = Matrix.of(QQ, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert A.block(1) == Matrix.of(QQ, [[5, 6], [8, 9]])
    assert A.block(1).embed(3) == Matrix.of(QQ, [[0, 0, 0], [0, 5, 6], [0, 8, 9]])


def test_json_round_trip(rng):
    for ring in (QQ, F7, MatrixRing(2, QQ)):
        A = Matrix.random(ring, 3, rng)
        assert Matrix.from_json(ring, A.to_json()) == A


# flattening over M_2(Q) -----------------------------------------------------

M2Q = MatrixRing(2, QQ)


def _unit(i, j):
    return Matrix.from_entries(QQ, 2, {(i, j): Fraction(1)})


def test_block_product_respects_entry_order():
    # entries E12 and E21 do not commute, so the product order shows up in the flattening
    A = Matrix.from_entries(M2Q, 2, {(0, 1): _unit(0, 1)})
    B = Matrix.from_entries(M2Q, 2, {(1, 0): _unit(1, 0)})
    assert flatten(A * B) == flatten(A) * flatten(B)
    assert (A * B)[0, 0] == _unit(0, 0)
    assert (B * A)[1, 1] == _unit(1, 1)


def test_flatten_identity():
    assert flatten(Matrix.identity(M2Q, 3)) == Matrix.identity(QQ, 6)


def test_flatten_homomorphism(rng):
    for _ in range(10):
        A, B = Matrix.random(M2Q, 3, rng), Matrix.random(M2Q, 3, rng)
        assert flatten(A * B) == flatten(A) * flatten(B)
        assert flatten(A + B) == flatten(A) + flatten(B)
        assert unflatten(flatten(A), 2) == A


def test_matrix_ring_centre(rng):
    R = MatrixRing(2, F7)
    assert R.is_central(R.scalar(F7.from_int(3)))
    assert not R.is_central(Matrix.from_entries(F7, 2, {(0, 1): F7.one()}))
