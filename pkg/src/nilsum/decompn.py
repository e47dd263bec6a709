"""Nilpotent and square-zero sums for ``n x n`` matrices whose trace is a sum of commutators.

Each reduction stage subtracts a square-zero, trace-zero matrix ``N_s(A)``
that cancels the top half of the diagonal of the current trailing block of
size ``s`` and pushes it into the bottom half, leaving a trailing block of
size ``(s + 1) // 2``.  After ``floor(log2 n)`` stages one or two diagonal
entries remain; everything off the diagonal is collected into one strictly
upper and one strictly lower matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import CommutatorWitness, Decomposition, NilpotentIndex, StrictLower, StrictUpper
from .core import Matrix
from .decomp3 import prescribe_diagonal
from .errors import ShapeError
from .witnesses import require_witness


def nk_sequence(n: int) -> list[int]:
    """``n_0 = n``, ``n_k = (n_{k-1} + 1) // 2`` for ``k = 1..floor(log2 n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    seq = [n]
    for _ in range(n.bit_length() - 1):
        seq.append((seq[-1] + 1) // 2)
    return seq


def build_Nn(A: Matrix) -> Matrix:
    n = A.n
    if n < 2:
        raise ShapeError("N_n(A) needs n >= 2")
    entries = {}
    for k in range(n // 2):
        akk = A[k, k]
        if not akk:
            continue
        mirror = n - 1 - k
        entries[(k, k)] = akk
        entries[(k, mirror)] = akk
        entries[(mirror, k)] = -akk
        entries[(mirror, mirror)] = -akk
    return Matrix.from_entries(A.ring, n, entries)


@dataclass
class ReductionTrace:
    sequence: list
    reducers: list          # n x n square-zero matrices, one per stage
    upper: Matrix           # accumulated strictly upper remainder
    lower: Matrix           # accumulated strictly lower remainder
    residual: Matrix        # v x v trailing block, v in {1, 2}

    @property
    def v(self) -> int:
        return self.residual.n

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "stages": [{"block": s} for s in self.sequence[:-1]],
            "residual": {"v": self.v, "D": self.residual.to_json()},
        }


def reduce_to_small(A: Matrix) -> ReductionTrace:
    """``A = sum(reducers) + upper + lower + (0 (+) residual)``."""
    n = A.n
    if n < 2:
        raise ShapeError("reduction needs n >= 2")
    seq = nk_sequence(n)
    zero = Matrix.zeros(A.ring, n)
    upper, lower = zero, zero
    reducers = []
    block = A
    for size, nxt in zip(seq, seq[1:]):
        nb = build_Nn(block)
        reducers.append(nb.embed(n))
        rest = block - nb
        cut = size - nxt
        # everything outside the next trailing block has zero diagonal
        outside = rest - rest.block(cut).embed(size)
        upper = upper + outside.strict_upper().embed(n)
        lower = lower + outside.strict_lower().embed(n)
        block = rest.block(cut)
    return ReductionTrace(seq, reducers, upper, lower, block)


def _residual_block(trace: ReductionTrace, size: int) -> Matrix:
    """The residual placed bottom-right in a ``size x size`` block (v = 1 goes to the corner entry)."""
    return trace.residual.embed(size)


def _split_by_commutators(C: Matrix, w: CommutatorWitness) -> list[Matrix]:
    """``C = C_1 + ... + C_k`` with ``Tr(C_i) = x_i y_i - y_i x_i``.

    For ``i >= 2`` the piece ``C_i`` is the single commutator on the (1,1)
    entry; ``C_1`` keeps the rest of ``C``.
    """
    pieces = []
    first = C
    for x, y in w.pairs[1:]:
        piece = Matrix.from_entries(C.ring, C.n, {(0, 0): x * y - y * x})
        pieces.append(piece)
        first = first - piece
    return [first] + pieces


def nilpotent_sum(A: Matrix, w: CommutatorWitness) -> Decomposition:
    """``A`` as ``floor(log2 n) + k + 2`` nilpotent matrices; ``w`` writes ``Tr(A)`` with ``k`` pairs."""
    n = A.n
    if n < 3:
        raise ShapeError("nilpotent_sum needs n >= 3")
    require_witness(w, A.trace())
    ring = A.ring
    trace = reduce_to_small(A)
    C = _residual_block(trace, 3)
    z = ring.zero()
    cubes = []
    upper, lower = trace.upper, trace.lower
    for piece, pair in zip(_split_by_commutators(C, w), w.pairs):
        a, b, c = piece.diag()
        single = CommutatorWitness(ring, (pair,), a + b + c)
        nil = prescribe_diagonal(ring, a, b, c, z, z, z, single).conjugate()
        rest = piece - nil
        cubes.append(nil.embed(n))
        upper = upper + rest.strict_upper().embed(n)
        lower = lower + rest.strict_lower().embed(n)
    m = len(trace.reducers)
    terms = trace.reducers + cubes + [upper, lower]
    claims = [NilpotentIndex(2)] * m + [NilpotentIndex(3)] * w.k + [StrictUpper(), StrictLower()]
    extra = {"reduction": trace.to_json(), "count_formula": {"log2": m, "k": w.k, "extra": 2}}
    return Decomposition("nilpotentsum", ring, A, terms, claims, [w], w.seed, extra)


def two_by_two_decompose(A: Matrix, w: CommutatorWitness) -> tuple[Matrix, Matrix, Matrix]:
    """Two square-zero matrices and a zero-diagonal remainder summing to the 2x2 matrix ``A``."""
    if A.n != 2:
        raise ShapeError("expected a 2x2 matrix")
    require_witness(w, A.trace(), k=1)
    ring = A.ring
    x, y = w.pairs[0]
    xy, yx = x * y, y * x
    one = ring.one()
    n1 = Matrix(ring, [[xy, x], [-(y * xy), -yx]])
    c = A[0, 0] - xy
    # c = 0 needs no correction; the zero matrix keeps degenerate inputs degenerate
    n2 = Matrix(ring, [[c, one], [-(c * c), -c]]) if c else Matrix.zeros(ring, 2)
    return n1, n2, A - n1 - n2


def strict_triangular_rowsplit(T: Matrix) -> list[Matrix]:
    """Split a strictly triangular matrix into ``n - 1`` single-row, square-zero pieces."""
    n = T.n
    if T.is_strict_upper():
        rows = range(n - 1)
    elif T.is_strict_lower():
        rows = range(1, n)
    else:
        raise ValueError("matrix is not strictly triangular")
    z = T.ring.zero()
    return [Matrix(T.ring, [T.rows[i] if i == r else [z] * n for i in range(n)]) for r in rows]


def squarezero_sum(A: Matrix, w: CommutatorWitness) -> Decomposition:
    """``A`` as ``floor(log2 n) + 2k + 2(n - 1)`` square-zero matrices."""
    n = A.n
    if n < 2:
        raise ShapeError("squarezero_sum needs n >= 2")
    require_witness(w, A.trace())
    ring = A.ring
    trace = reduce_to_small(A)
    E = _residual_block(trace, 2)
    upper, lower = trace.upper, trace.lower
    pairs_terms = []
    for piece, pair in zip(_split_by_commutators(E, w), w.pairs):
        single = CommutatorWitness(ring, (pair,), piece.trace())
        n1, n2, rest = two_by_two_decompose(piece, single)
        pairs_terms += [n1.embed(n), n2.embed(n)]
        upper = upper + rest.strict_upper().embed(n)
        lower = lower + rest.strict_lower().embed(n)
    m = len(trace.reducers)
    terms = trace.reducers + pairs_terms + strict_triangular_rowsplit(upper) + _lower_rowsplit(lower)
    claims = [NilpotentIndex(2)] * len(terms)
    extra = {"reduction": trace.to_json(),
             "count_formula": {"log2": m, "k": w.k, "k_multiplier": 2, "extra": 2 * (n - 1)}}
    return Decomposition("squarezerosum", ring, A, terms, claims, [w], w.seed, extra)


def _lower_rowsplit(T: Matrix) -> list[Matrix]:
    # a zero accumulator is both strictly upper and strictly lower; keep the lower row layout
    if T.is_zero():
        z = Matrix.zeros(T.ring, T.n)
        return [z] * (T.n - 1)
    return strict_triangular_rowsplit(T)
