"""Commutator witnesses: construction and checking.

Over a field, every trace-zero matrix ``M`` is a commutator.  The
construction conjugates ``M`` to a zero-diagonal matrix ``B``, picks a
diagonal ``D`` with distinct entries and solves ``B = DC - CD`` entrywise.
In the Weyl algebra every element is a commutator with ``D`` via
:func:`nilsum.core.weyl_ad_preimage`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .certificate import CommutatorWitness
from .core import WEYL, Matrix, MatrixRing, PrimeField, Ring, rank, weyl_ad_preimage
from .core.weyl import D
from .errors import InfeasibleError, RingMismatchError, ScalarMatrixError, WitnessMismatchError

__all__ = [
    "CommutatorWitness", "InnerDerivationOracle", "commutator_sum", "require_witness", "split_k_commutators",
    "trace_zero_witness", "weyl_oracle", "witness_check", "zero_diagonal_similarity",
]


def commutator_sum(ring: Ring, pairs) -> object:
    total = ring.zero()
    for x, y in pairs:
        total = total + (x * y - y * x)
    return total


def witness_check(w: CommutatorWitness) -> bool:
    for x, y in w.pairs:
        w.ring.check(x, y)
    w.ring.check(w.target)
    return commutator_sum(w.ring, w.pairs) == w.target


def require_witness(w: CommutatorWitness, target, k: int | None = None):
    """Raise unless ``w`` is valid and certifies exactly ``target``."""
    if k is not None and w.k != k:
        raise WitnessMismatchError(f"expected {k} commutator pair(s), got {w.k}")
    if not witness_check(w):
        raise WitnessMismatchError("witness pairs do not sum to the stated target")
    if w.target != target:
        raise WitnessMismatchError("witness certifies a different element")


@dataclass(frozen=True)
class InnerDerivationOracle:
    """An element ``r`` with a right inverse of ``ad_r: s -> rs - sr``."""

    ring: Ring
    r: object
    preimage: Callable

    def __call__(self, s):
        return self.preimage(s)

    def check(self, s) -> bool:
        g = self.preimage(s)
        return self.r * g - g * self.r == s

    def witness(self, s, seed=None) -> CommutatorWitness:
        return CommutatorWitness(self.ring, ((self.r, self.preimage(s)),), s, seed)


def weyl_oracle() -> InnerDerivationOracle:
    return InnerDerivationOracle(WEYL, D, weyl_ad_preimage)


# trace-zero matrices over a field -------------------------------------------


def _mat_vec(m: Matrix, v: list) -> list:
    z = m.ring.zero()
    out = []
    for row in m.rows:
        acc = z
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def _candidate_vectors(field: Ring, n: int):
    one, zero = field.one(), field.zero()

    def unit(i):
        return [one if t == i else zero for t in range(n)]

    for i in range(n):
        yield unit(i)
    for i in range(n):
        for j in range(i + 1, n):
            yield [a + b for a, b in zip(unit(i), unit(j))]
    rng = random.Random(0)
    for _ in range(512):
        yield [field.random(rng) for _ in range(n)]


def _zero_corner_basis(m: Matrix) -> tuple[Matrix, Matrix]:
    """Invertible ``P`` with ``(P^-1 M P)[0,0] == 0`` and a trailing block that is not a nonzero scalar."""
    field, n = m.ring, m.n
    one, zero = field.one(), field.zero()
    for v in _candidate_vectors(field, n):
        if not any(v):
            continue
        w = _mat_vec(m, v)
        if rank([v, w], field) < 2:
            continue
        basis = [v, w]
        for i in range(n):
            if len(basis) == n:
                break
            e = [one if t == i else zero for t in range(n)]
            if rank(basis + [e], field) > len(basis):
                basis.append(e)
        p = Matrix(field, [[basis[c][r] for c in range(n)] for r in range(n)])
        p_inv = p.inverse()
        trailing = (p_inv * m * p).block(1)
        if trailing.n >= 2 and trailing.is_scalar() and not trailing.is_zero():
            continue
        return p, p_inv
    raise ScalarMatrixError("no basis vector found that avoids a scalar trailing block")


def _pad_identity(p: Matrix, n: int) -> Matrix:
    off = n - p.n
    one, zero = p.ring.one(), p.ring.zero()
    rows = [[one if i == j else zero for j in range(n)] for i in range(off)]
    rows += [[zero] * off + list(r) for r in p.rows]
    return Matrix(p.ring, rows)


def zero_diagonal_similarity(m: Matrix) -> Matrix:
    """Invertible ``S`` with ``S M S^-1`` zero on the diagonal (``M`` nonscalar, trace zero)."""
    field = m.ring
    if not field.is_field:
        raise RingMismatchError(f"zero-diagonal similarity needs a field, got {field}")
    n = m.n
    ident = Matrix.identity(field, n)
    if m.has_zero_diagonal():
        return ident
    if m.is_scalar():
        raise ScalarMatrixError("a nonzero scalar matrix has no zero-diagonal conjugate")
    if m.trace():
        raise InfeasibleError("a zero-diagonal matrix has trace zero; input trace is nonzero")
    s, b = ident, m
    for start in range(n - 1):
        blk = b.block(start)
        if blk.has_zero_diagonal():
            break
        p, p_inv = _zero_corner_basis(blk)
        pf, pf_inv = _pad_identity(p, n), _pad_identity(p_inv, n)
        b = pf_inv * b * pf
        s = pf_inv * s
    return s


def _distinct_diagonal(field: Ring, n: int) -> list:
    if isinstance(field, PrimeField) and field.p < n:
        raise InfeasibleError(f"F_{field.p} has fewer than {n} distinct elements")
    return [field.from_int(i) for i in range(n)]


def trace_zero_witness(m: Matrix, seed: int | None = None) -> CommutatorWitness:
    """One pair ``(X, Y)`` of matrices with ``XY - YX == m``."""
    field, n = m.ring, m.n
    if not field.is_field:
        raise RingMismatchError(f"trace-zero witness needs a field, got {field}")
    ring = MatrixRing(n, field)
    if m.trace():
        raise InfeasibleError("matrix has nonzero trace, so it is not a commutator")
    zero = Matrix.zeros(field, n)
    if m.is_zero():
        return CommutatorWitness(ring, ((zero, zero),), m, seed)
    if m.is_scalar():
        raise InfeasibleError("nonzero scalar matrix with zero trace is not handled")
    d = _distinct_diagonal(field, n)
    s = zero_diagonal_similarity(m)
    s_inv = s.inverse()
    b = s * m * s_inv
    c = Matrix(field, [[b[i, j] / (d[i] - d[j]) if i != j else field.zero() for j in range(n)] for i in range(n)])
    x = s_inv * Matrix.diagonal(field, d) * s
    y = s_inv * c * s
    return CommutatorWitness(ring, ((x, y),), m, seed)


# sums of k commutators ---------------------------------------------------------


def _random_trace_zero(field: Ring, m: int, rng: random.Random) -> Matrix:
    a = Matrix.random(field, m, rng)
    return a.replace({(m - 1, m - 1): a[m - 1, m - 1] - a.trace()})


def split_k_commutators(t, k: int, ring: Ring, seed: int = 0,
                        oracle: InnerDerivationOracle | None = None) -> CommutatorWitness:
    """Write ``t`` as a sum of ``k`` commutators in ``ring``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ring.check(t)
    rng = random.Random(seed)
    if oracle is None and ring == WEYL:
        oracle = weyl_oracle()

    if oracle is not None:
        parts = [ring.random(rng, max_degree=2, max_terms=3) for _ in range(k - 1)]
        last = t
        for p in parts:
            last = last - p
        pairs = tuple((oracle.r, oracle(p)) for p in parts + [last])
        return CommutatorWitness(ring, pairs, t, seed)

    if isinstance(ring, MatrixRing):
        if not ring.base.is_field:
            raise InfeasibleError(f"no witness construction for {ring}")
        if t.trace():
            raise InfeasibleError("element has nonzero scalar trace, so it is not a sum of commutators")
        for _ in range(100):
            parts = [_random_trace_zero(ring.base, ring.m, rng) for _ in range(k - 1)]
            last = t
            for p in parts:
                last = last - p
            if last.is_scalar() and not last.is_zero():
                continue
            pairs = tuple(trace_zero_witness(p).pairs[0] for p in parts + [last])
            return CommutatorWitness(ring, pairs, t, seed)
        raise InfeasibleError("could not avoid a nonzero scalar summand")

    if ring.commutative:
        if t:
            raise InfeasibleError("commutators vanish in a commutative ring; target is nonzero")
        z = ring.zero()
        return CommutatorWitness(ring, tuple((z, z) for _ in range(k)), t, seed)

    raise InfeasibleError(f"no witness construction for {ring}")
