"""Commutative coefficient rings: the rationals and prime fields.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field
elements are :class:`Fp` instances carrying their modulus, so that mixing
residues of different fields is caught instead of silently reduced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from ..errors import RingMismatchError


class Ring:
    """Interface every coefficient ring implements.

    Elements use Python operators for arithmetic; the ring object supplies
    constants, membership, random sampling, JSON encoding and the dense
    matrix-multiplication kernel used by :class:`nilsum.core.matrix.Matrix`.
    """

    kind = "abstract"
    commutative = True
    is_field = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, value: int):
        raise NotImplementedError

    def contains(self, element) -> bool:
        raise NotImplementedError

    def random(self, rng: random.Random, **caps):
        raise NotImplementedError

    def encode(self, element):
        raise NotImplementedError

    def decode(self, obj):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def is_central(self, element) -> bool:
        """Structural centrality test (exact, no sampling)."""
        return self.commutative

    # checked arithmetic -------------------------------------------------

    def check(self, *elements):
        for e in elements:
            if not self.contains(e):
                raise RingMismatchError(f"{e!r} is not an element of {self}")

    def add(self, a, b):
        self.check(a, b)
        return a + b

    def sub(self, a, b):
        self.check(a, b)
        return a - b

    def mul(self, a, b):
        self.check(a, b)
        return a * b

    def neg(self, a):
        self.check(a)
        return -a

    def eq(self, a, b) -> bool:
        self.check(a, b)
        return a == b

    def commutator(self, x, y):
        return x * y - y * x

    def matmul(self, a, b):
        """Dense product of two square row-tuples; zero entries of ``a`` are skipped."""
        zero = self.zero()
        out = []
        for row in a:
            acc = [zero] * len(b[0])
            for k, aik in enumerate(row):
                if aik:
                    acc = [s + aik * bkj if bkj else s for s, bkj in zip(acc, b[k])]
            out.append(tuple(acc))
        return tuple(out)


@dataclass(frozen=True)
class Rationals(Ring):
    kind = "Rational"
    commutative = True
    is_field = True

    def __str__(self):
        return "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, value):
        return Fraction(value)

    def contains(self, element):
        return isinstance(element, Fraction)

    def inv(self, a):
        return 1 / a

    def random(self, rng, bound=9, den=4, **caps):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, den))

    def encode(self, element):
        return {"num": str(element.numerator), "den": str(element.denominator)}

    def decode(self, obj):
        if isinstance(obj, dict):
            den = int(obj.get("den", 1))
            if den <= 0:
                raise ValueError("rational denominator must be positive")
            return Fraction(int(obj["num"]), den)
        if isinstance(obj, bool):
            raise ValueError(f"not a rational: {obj!r}")
        if isinstance(obj, (int, str)):
            return Fraction(obj)
        raise ValueError(f"not a rational: {obj!r}")

    def to_json(self):
        return {"kind": self.kind}

    def matmul(self, a, b):
        # integer kernel over a common denominator; Fraction arithmetic per
        # inner-product term is ~30x slower
        da = lcm(*(x.denominator for row in a for x in row))
        db = lcm(*(x.denominator for row in b for x in row))
        ai = [[x.numerator * (da // x.denominator) for x in row] for row in a]
        bi = [[x.numerator * (db // x.denominator) for x in row] for row in b]
        width = len(b[0])
        d = da * db
        out = []
        for row in ai:
            acc = [0] * width
            for k, aik in enumerate(row):
                if aik:
                    acc = [s + aik * t for s, t in zip(acc, bi[k])]
            out.append(tuple(Fraction(v, d) for v in acc))
        return tuple(out)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % f for f in range(3, isqrt(p) + 1, 2))


class Fp:
    """Residue modulo a prime ``p``; ``value`` is always reduced to ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise RingMismatchError(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return None

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else Fp(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else Fp(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else Fp(v - self.value, self.p)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else Fp(self.value * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self) -> "Fp":
        if not self.value:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return self * Fp(v, self.p).inverse()

    def __rtruediv__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else self.inverse() * v

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** -e
        return Fp(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int
    kind = "PrimeField"
    commutative = True
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __str__(self):
        return f"F{self.p}"

    def zero(self):
        return Fp(0, self.p)

    def one(self):
        return Fp(1, self.p)

    def from_int(self, value):
        return Fp(value, self.p)

    def contains(self, element):
        return isinstance(element, Fp) and element.p == self.p

    def inv(self, a):
        return a.inverse()

    def random(self, rng, **caps):
        return Fp(rng.randrange(self.p), self.p)

    def elements(self):
        return [Fp(v, self.p) for v in range(self.p)]

    def encode(self, element):
        return element.value

    def decode(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ValueError(f"prime-field element must be an integer, got {obj!r}")
        return Fp(obj, self.p)

    def to_json(self):
        return {"kind": self.kind, "p": self.p}

    def cube_roots_of_unity(self):
        """The three roots of X^3 - 1, ascending; requires p = 1 mod 3."""
        if self.p % 3 != 1:
            raise ValueError(f"X^3 - 1 does not split over F_{self.p}")
        return [Fp(v, self.p) for v in range(1, self.p) if pow(v, 3, self.p) == 1]

    def matmul(self, a, b):
        p = self.p
        width = len(b[0])
        bi = [[x.value for x in row] for row in b]
        out = []
        for row in a:
            acc = [0] * width
            for k, aik in enumerate(row):
                v = aik.value
                if v:
                    acc = [s + v * t for s, t in zip(acc, bi[k])]
            out.append(tuple(Fp(s, p) for s in acc))
        return tuple(out)
