"""Decompositions of 3x3 matrices driven by a single commutator.

The engine is conjugation by

    U(x) = [[x, 1, 1],       U(x)^-1 = [[0,  0,  1  ],
            [1, 1, 0],                  [0,  1, -1  ],
            [1, 0, 0]]                  [1, -1, 1-x]]

For ``T`` upper triangular with diagonal ``(s, t, u)`` and superdiagonal
entries ``p = T[0,1]``, ``q = T[0,2]``, ``r = T[1,2]``::

    diag(U(x) T U(x)^-1) = (xq + r + u,  p - q - r + t,  -p + q - qx + s)

so prescribing that diagonal is the system ``xq + r = a``, ``p - q - r = b``,
``-p + q - qx = c``; adding the equations gives ``xq - qx = a + b + c``.
"""

from __future__ import annotations

import random
from typing import NamedTuple, Sequence

from .certificate import (
    AnnihilatedBy, CommutatorWitness, ConjugatedStrictUpper, ConjugatedUpperWithDiagonal, Decomposition,
    LowerWithDiagonal, PolySpec, StrictLower, StrictUpper, Unipotent, UpperWithDiagonal,
)
from .core import Matrix, MatrixRing, Ring
from .errors import InfeasibleError, RingMismatchError, ShapeError
from .witnesses import InnerDerivationOracle, require_witness, split_k_commutators

CENTRALITY_SAMPLES = 16


def lemma_baza_solve(a, b, c, w: CommutatorWitness):
    """Solve ``xq + r = a``, ``p - q - r = b``, ``-p + q - qx = c`` given ``x0 y0 - y0 x0 = a + b + c``."""
    require_witness(w, a + b + c, k=1)
    x0, y0 = w.pairs[0]
    x, q = x0, y0
    r = a - x0 * y0
    p = b + q + r
    return x, p, q, r


def build_U(ring: Ring, x) -> Matrix:
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[x, one, one], [one, one, zero], [one, zero, zero]])


def build_U_inv(ring: Ring, x) -> Matrix:
    one, zero = ring.one(), ring.zero()
    return Matrix(ring, [[zero, zero, one], [zero, one, -one], [one, -one, one - x]])


class Prescription(NamedTuple):
    U: Matrix
    T: Matrix
    U_inv: Matrix

    def conjugate(self) -> Matrix:
        return self.U * self.T * self.U_inv


def _upper(ring: Ring, s, t, u, p, q, r) -> Matrix:
    z = ring.zero()
    return Matrix(ring, [[s, p, q], [z, t, r], [z, z, u]])


def prescribe_diagonal(ring: Ring, a, b, c, s, t, u, w: CommutatorWitness) -> Prescription:
    """``T`` upper with diagonal ``(s, t, u)`` and ``diag(U T U^-1) == (a, b, c)``.

    ``w`` must certify ``(a - u) + (b - t) + (c - s)``.
    """
    x0, p0, q0, r0 = lemma_baza_solve(a - u, b - t, c - s, w)
    return Prescription(build_U(ring, x0), _upper(ring, s, t, u, p0, q0, r0), build_U_inv(ring, x0))


def prescribe_diagonal_fixed_U(oracle: InnerDerivationOracle, a, b, c, s, t, u) -> Prescription:
    """Same contract as :func:`prescribe_diagonal` with ``U = U(r)`` fixed by the oracle."""
    shifted = (a - u) + (b - t) + (c - s)
    return prescribe_diagonal(oracle.ring, a, b, c, s, t, u, oracle.witness(shifted))


def _check_3x3(A: Matrix):
    if A.n != 3:
        raise ShapeError(f"expected a 3x3 matrix, got {A.n}x{A.n}")


def corollary_decompose(A: Matrix, targets: Sequence[Sequence], w: CommutatorWitness,
                        lemma: str = "corollary") -> Decomposition:
    """Split ``A`` as ``U T1 U^-1 + T2 + T3`` with prescribed diagonals.

    ``targets[k] = (s_k, t_k, u_k)``; ``T1``, ``T2`` are upper with diagonals
    ``(s1, t1, u1)``, ``(s2, t2, u2)``; ``T3`` is lower with diagonal
    ``(u3, t3, s3)``.  ``w`` certifies ``a + b + c - sum(targets)``.
    """
    _check_3x3(A)
    ring = A.ring
    (s1, t1, u1), (s2, t2, u2), (s3, t3, u3) = targets
    a, b, c = A.diag()
    pre = prescribe_diagonal(ring, a - s2 - u3, b - t2 - t3, c - u2 - s3, s1, t1, u1, w)
    first = pre.conjugate()
    rest = A - first
    second = rest.strict_upper().with_diagonal((s2, t2, u2))
    third = rest.strict_lower().with_diagonal((u3, t3, s3))
    claims = [
        ConjugatedUpperWithDiagonal(pre.U, pre.U_inv, (s1, t1, u1)),
        UpperWithDiagonal((s2, t2, u2)),
        LowerWithDiagonal((u3, t3, s3)),
    ]
    return Decomposition(lemma, ring, A, [first, second, third], claims, [w], w.seed)


def check_central(ring: Ring, element, rng: random.Random | None = None, samples: int = CENTRALITY_SAMPLES) -> bool:
    if not ring.is_central(element):
        return False
    rng = rng or random.Random(0)
    for _ in range(samples):
        s = ring.random(rng)
        if element * s != s * element:
            return False
    return True


def _require_central_roots(ring: Ring, polys: Sequence[PolySpec]):
    rng = random.Random(0)
    for poly in polys:
        for root in poly.roots:
            ring.check(root)
            if not check_central(ring, root, rng):
                raise InfeasibleError(f"polynomial root {root} is not central in {ring}")


def _sum(ring: Ring, items):
    total = ring.zero()
    for v in items:
        total = total + v
    return total


def poly_sum_3(A: Matrix, polys: Sequence[PolySpec], w: CommutatorWitness) -> Decomposition:
    """``A = A1 + A2 + A3`` with ``p_k(A_k) == 0``; ``w`` certifies ``Tr(A) - sum of all nine roots``."""
    _check_3x3(A)
    if len(polys) != 3:
        raise ValueError("poly_sum_3 needs three polynomials")
    _require_central_roots(A.ring, polys)
    targets = [p.roots for p in polys]
    d = corollary_decompose(A, targets, w, lemma="polysum3")
    d.claims = [AnnihilatedBy(p) for p in polys]
    return d


def _scalar_trace(ring: Ring, element):
    return element.trace() if isinstance(ring, MatrixRing) else element


def poly_sum_4(A: Matrix, polys: Sequence[PolySpec], seed: int = 0) -> Decomposition:
    """Four-term polynomial sum for a 3x3 matrix over ``M_m(field)`` (or a field, m = 1).

    Feasible exactly when ``tr(flatten(A)) == m * (sum of all twelve roots)``.
    """
    _check_3x3(A)
    ring = A.ring
    if len(polys) != 4:
        raise ValueError("poly_sum_4 needs four polynomials")
    if isinstance(ring, MatrixRing):
        m = ring.m
    elif ring.is_field:
        m = 1
    else:
        raise RingMismatchError(f"poly_sum_4 works over M_m(field) or a field, not {ring}")
    _require_central_roots(ring, polys)
    p1, p2, p3, p4 = polys
    tau_m = p1.root_sum(ring) + p2.root_sum(ring)
    tau_n = p3.root_sum(ring) + p4.root_sum(ring)
    trace = A.trace()
    gap = trace - tau_m - tau_n
    if _scalar_trace(ring, gap):
        raise InfeasibleError(
            "trace obstruction: tr(flatten(A)) != m * (sum of the roots). Only the infinite-dimensional "
            "setting removes it (every operator there is a sum of two commutators, by the Brown-Pearcy "
            "theorem), and that setting is out of scope."
        )
    # N carries the whole trace surplus in its (1,1) entry; M keeps everything else
    shift = ring.zero()
    if isinstance(ring, MatrixRing) and gap.is_scalar() and gap:
        # a nonzero scalar is not a commutator over F_p; move a trace-zero nonscalar piece across
        shift = Matrix.from_entries(ring.base, m, {(0, 1): ring.base.one()})
    n11 = trace - tau_m + shift
    N = Matrix.from_entries(ring, 3, {(0, 0): n11})
    M = A - N
    w_m = split_k_commutators(M.trace() - tau_m, 1, ring, seed=seed)
    w_n = split_k_commutators(N.trace() - tau_n, 1, ring, seed=seed)
    z = ring.zero()
    dm = corollary_decompose(M, [p1.roots, p2.roots, (z, z, z)], w_m)
    a4, b4, c4 = p4.roots
    dn = corollary_decompose(N, [p3.roots, (z, z, z), (c4, b4, a4)], w_n)
    terms = [dm.terms[0], dm.terms[1] + dn.terms[1], dn.terms[0], dm.terms[2] + dn.terms[2]]
    claims = [AnnihilatedBy(p) for p in polys]
    return Decomposition("polysum4", ring, A, terms, claims, [w_m, w_n], seed, {"split": {"M": M.to_json()}})


def three_nilpotent_subrings(A: Matrix, oracle: InnerDerivationOracle) -> Decomposition:
    """``A = S_u + S_l + U(r) T U(r)^-1`` with every summand in a nil subring of index 3."""
    _check_3x3(A)
    ring = A.ring
    if oracle.ring != ring:
        raise RingMismatchError(f"oracle is for {oracle.ring}, matrix is over {ring}")
    a, b, c = A.diag()
    z = ring.zero()
    pre = prescribe_diagonal_fixed_U(oracle, a, b, c, z, z, z)
    conj = pre.conjugate()
    rest = A - conj
    terms = [rest.strict_upper(), rest.strict_lower(), conj]
    claims = [StrictUpper(), StrictLower(), ConjugatedStrictUpper(pre.U, pre.U_inv)]
    w = oracle.witness(a + b + c)
    return Decomposition("subrings", ring, A, terms, claims, [w])


def heap(x, y, z):
    """Abelian heap bracket ``[x, y, z] = x - y + z``."""
    return x - y + z


def truss_witness(A: Matrix, oracle: InnerDerivationOracle) -> tuple[Matrix, Matrix, Matrix]:
    """Unipotent ``k in 1+S_u``, ``l in 1+S_l``, ``m in 1+U S_u U^-1`` with ``[k, l, m] == A``."""
    d = truss_decompose(A, oracle)
    k, l, m = d.terms
    return k, l, m


def truss_decompose(A: Matrix, oracle: InnerDerivationOracle) -> Decomposition:
    ring = A.ring
    one = Matrix.identity(ring, A.n)
    inner = three_nilpotent_subrings(A - one, oracle)
    s1, s2, s3 = inner.terms
    terms = [one + s1, one - s2, one + s3]
    claims = [Unipotent(c) for c in inner.claims]
    return Decomposition("truss", ring, A, terms, claims, inner.witnesses)
