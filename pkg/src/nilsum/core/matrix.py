"""Dense square matrices over any supported ring, and matrix rings as coefficient rings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import RingMismatchError, ShapeError, SingularMatrixError
from .fields import PrimeField, Rationals, Ring


class Matrix:
    """An immutable ``n x n`` matrix whose entries lie in ``ring``.

    ``A * B`` is the matrix product when ``B`` is a matrix over the same
    ring; any other right operand is treated as a ring element and
    multiplies every entry on the right (``c * A`` multiplies on the left).
    """

    __slots__ = ("ring", "rows", "_hash")

    def __init__(self, ring: Ring, rows: Iterable[Sequence]):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ShapeError("matrix must be square")
        self._hash = None

    # construction --------------------------------------------------------

    @classmethod
    def of(cls, ring: Ring, rows) -> "Matrix":
        """Like the constructor, but plain ``int`` entries are mapped into ``ring``."""
        return cls(ring, [[ring.from_int(v) if isinstance(v, int) else v for v in r] for r in rows])

    @classmethod
    def zeros(cls, ring: Ring, n: int) -> "Matrix":
        z = ring.zero()
        return cls(ring, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls.scalar(ring, n, ring.one())

    @classmethod
    def scalar(cls, ring: Ring, n: int, c) -> "Matrix":
        z = ring.zero()
        return cls(ring, [[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring: Ring, entries: Sequence) -> "Matrix":
        z = ring.zero()
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, ring: Ring, n: int, entries: dict) -> "Matrix":
        """Sparse constructor: ``entries`` maps ``(i, j)`` to ring elements."""
        z = ring.zero()
        return cls(ring, [[entries.get((i, j), z) for j in range(n)] for i in range(n)])

    @classmethod
    def random(cls, ring: Ring, n: int, rng, **caps) -> "Matrix":
        return cls(ring, [[ring.random(rng, **caps) for _ in range(n)] for _ in range(n)])

    # access ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def entries(self):
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                yield i, j, v

    def diag(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(self.n))

    def trace(self):
        total = self.ring.zero()
        for v in self.diag():
            total = total + v
        return total

    def replace(self, updates: dict) -> "Matrix":
        rows = [list(r) for r in self.rows]
        for (i, j), v in updates.items():
            rows[i][j] = v
        return Matrix(self.ring, rows)

    def block(self, start: int) -> "Matrix":
        """Trailing principal block on indices ``start..n-1``."""
        return Matrix(self.ring, [r[start:] for r in self.rows[start:]])

    def embed(self, n: int) -> "Matrix":
        """``0_{n-k} (+) self`` as an ``n x n`` matrix (self placed bottom-right)."""
        k = self.n
        if k > n:
            raise ShapeError(f"cannot embed {k}x{k} into {n}x{n}")
        off = n - k
        z = self.ring.zero()
        rows = [[z] * n for _ in range(off)]
        rows += [[z] * off + list(r) for r in self.rows]
        return Matrix(self.ring, rows)

    def strict_upper(self) -> "Matrix":
        z = self.ring.zero()
        return Matrix(self.ring, [[v if j > i else z for j, v in enumerate(r)] for i, r in enumerate(self.rows)])

    def strict_lower(self) -> "Matrix":
        z = self.ring.zero()
        return Matrix(self.ring, [[v if j < i else z for j, v in enumerate(r)] for i, r in enumerate(self.rows)])

    def with_diagonal(self, entries: Sequence) -> "Matrix":
        return self.replace({(i, i): v for i, v in enumerate(entries)})

    # predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(v for r in self.rows for v in r)

    def is_strict_upper(self) -> bool:
        return not any(v for i, j, v in self.entries() if j <= i)

    def is_strict_lower(self) -> bool:
        return not any(v for i, j, v in self.entries() if j >= i)

    def is_upper(self) -> bool:
        return not any(v for i, j, v in self.entries() if j < i)

    def is_lower(self) -> bool:
        return not any(v for i, j, v in self.entries() if j > i)

    def has_zero_diagonal(self) -> bool:
        return not any(self.diag())

    def is_scalar(self) -> bool:
        d = self.rows[0][0] if self.n else None
        return all((v == d) if i == j else not v for i, j, v in self.entries())

    # arithmetic ------------------------------------------------------------

    def _same(self, other: "Matrix"):
        if other.ring != self.ring:
            raise RingMismatchError(f"matrices over {self.ring} and {other.ring}")
        if other.n != self.n:
            raise ShapeError(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same(other)
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same(other)
        return Matrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.ring, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix) and other.ring == self.ring:
            self._same(other)
            return Matrix(self.ring, self.ring.matmul(self.rows, other.rows))
        if not self.ring.contains(other):
            return NotImplemented
        return Matrix(self.ring, [[a * other for a in r] for r in self.rows])

    def __rmul__(self, other):
        if not self.ring.contains(other):
            return NotImplemented
        return Matrix(self.ring, [[other * a for a in r] for r in self.rows])

    def __pow__(self, e: int) -> "Matrix":
        if e < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.ring, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Matrix({self.ring}, {[[str(v) for v in r] for r in self.rows]})"

    # field-only linear algebra -------------------------------------------

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse; the entry ring must be a field."""
        return mat_inverse_commutative(self)

    # serialization ---------------------------------------------------------

    def to_json(self) -> list:
        enc = self.ring.encode
        return [[enc(v) for v in r] for r in self.rows]

    @classmethod
    def from_json(cls, ring: Ring, obj) -> "Matrix":
        if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
            raise ValueError("matrix JSON must be a list of rows")
        return cls(ring, [[ring.decode(v) for v in r] for r in obj])


def _require_field(ring: Ring):
    if not ring.is_field:
        raise RingMismatchError(f"{ring} is not a field")


def row_reduce(rows: list, ring: Ring) -> tuple[list, list]:
    """Reduced row echelon form over a field; returns (rows, pivot columns)."""
    _require_field(ring)
    m = [list(r) for r in rows]
    pivots = []
    width = len(m[0]) if m else 0
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ring.inv(m[r][c])
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence], ring: Ring) -> int:
    if not vectors:
        return 0
    return len(row_reduce(list(vectors), ring)[1])


def mat_inverse_commutative(a: Matrix) -> Matrix:
    ring = a.ring
    _require_field(ring)
    n = a.n
    one, zero = ring.one(), ring.zero()
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.rows)]
    red, pivots = row_reduce(aug, ring)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix(ring, [r[n:] for r in red])


@dataclass(frozen=True)
class MatrixRing(Ring):
    """``M_m(base)`` used as a (noncommutative) coefficient ring; base must be a field."""

    m: int
    base: Ring
    kind = "MatrixRing"
    is_field = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("matrix ring dimension must be >= 1")
        if not isinstance(self.base, (Rationals, PrimeField)):
            raise ValueError("matrix ring base must be Q or a prime field (nesting depth 1)")

    @property
    def commutative(self):
        return self.m == 1

    def __str__(self):
        return f"M({self.m},{self.base})"

    def zero(self):
        return Matrix.zeros(self.base, self.m)

    def one(self):
        return Matrix.identity(self.base, self.m)

    def from_int(self, value):
        return Matrix.scalar(self.base, self.m, self.base.from_int(value))

    def scalar(self, c):
        return Matrix.scalar(self.base, self.m, c)

    def contains(self, element):
        return isinstance(element, Matrix) and element.ring == self.base and element.n == self.m

    def is_central(self, element):
        return element.is_scalar()

    def scalar_trace(self, element):
        return element.trace()

    def random(self, rng, **caps):
        return Matrix.random(self.base, self.m, rng, **caps)

    def encode(self, element):
        return element.to_json()

    def decode(self, obj):
        mat = Matrix.from_json(self.base, obj)
        if mat.n != self.m:
            raise ValueError(f"expected a {self.m}x{self.m} block, got {mat.n}x{mat.n}")
        return mat

    def to_json(self):
        return {"kind": self.kind, "m": self.m, "base": self.base.to_json()}


def flatten(a: Matrix) -> Matrix:
    """Identify ``(M_m)_n`` with ``M_{nm}`` by expanding every block entry."""
    ring = a.ring
    if not isinstance(ring, MatrixRing):
        raise RingMismatchError(f"flatten needs a matrix over a matrix ring, got {ring}")
    m = ring.m
    rows = []
    for brow in a.rows:
        for i in range(m):
            rows.append([blk.rows[i][j] for blk in brow for j in range(m)])
    return Matrix(ring.base, rows)


def unflatten(a: Matrix, m: int) -> Matrix:
    if a.n % m:
        raise ShapeError(f"{a.n} is not a multiple of {m}")
    ring = MatrixRing(m, a.ring)
    n = a.n // m
    return Matrix(ring, [
        [Matrix(a.ring, [a.rows[bi * m + i][bj * m:(bj + 1) * m] for i in range(m)]) for bj in range(n)]
        for bi in range(n)
    ])
