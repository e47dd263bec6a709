"""The first Weyl algebra over the rationals, kept in normal form.

An element is a finite sum of ``c * x^a D^b`` with all powers of ``x`` to
the left of all powers of ``D`` (``D`` is the derivative, ``D x - x D = 1``).
With this convention the inner derivation ``ad_D`` is ``d/dx`` on the
coefficient polynomials, which is onto in characteristic zero.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm, perm
from typing import Iterable

from .fields import Ring


@lru_cache(maxsize=65536)
def _monomial_product(a: int, b: int, c: int, d: int) -> tuple:
    # x^a D^b * x^c D^d = sum_j C(b,j) c!/(c-j)! x^(a+c-j) D^(b+d-j)
    return tuple(((a + c - j, b + d - j), comb(b, j) * perm(c, j)) for j in range(min(b, c) + 1))


class WeylElem:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        clean = {}
        for (a, b), v in dict(coeffs or {}).items():
            if a < 0 or b < 0:
                raise ValueError("Weyl exponents must be non-negative")
            v = Fraction(v)
            if v:
                clean[(int(a), int(b))] = v
        self._c = clean
        self._hash = None

    @classmethod
    def _raw(cls, clean: dict) -> "WeylElem":
        obj = cls.__new__(cls)
        obj._c = clean
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1) -> "WeylElem":
        return cls({(a, b): coeff})

    @classmethod
    def constant(cls, value) -> "WeylElem":
        return cls({(0, 0): value})

    @property
    def terms(self) -> tuple:
        """Sorted ``((a, b), coeff)`` pairs."""
        return tuple(sorted(self._c.items()))

    def coeff(self, a: int, b: int) -> Fraction:
        return self._c.get((a, b), Fraction(0))

    def degree(self) -> int:
        return max((a + b for a, b in self._c), default=-1)

    def __len__(self):
        return len(self._c)

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._c)

    @staticmethod
    def _coerce(other):
        if isinstance(other, WeylElem):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return WeylElem.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return WeylElem._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElem._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._c or not other._c:
            return WeylElem._raw({})
        # integer accumulation over a common denominator
        df = lcm(*(v.denominator for v in self._c.values()))
        dg = lcm(*(v.denominator for v in other._c.values()))
        fs = [(a, b, v.numerator * (df // v.denominator)) for (a, b), v in self._c.items()]
        gs = [(c, d, v.numerator * (dg // v.denominator)) for (c, d), v in other._c.items()]
        acc = defaultdict(int)
        for a, b, cf in fs:
            for c, d, cg in gs:
                prod = cf * cg
                if b == 0 or c == 0:
                    acc[(a + c, b + d)] += prod
                    continue
                for key, k in _monomial_product(a, b, c, d):
                    acc[key] += prod * k
        den = df * dg
        return WeylElem._raw({k: Fraction(v, den) for k, v in acc.items() if v})

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, e: int):
        result = WeylElem.constant(1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"WeylElem({str(self)!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (a, b), v in self.terms:
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("x" if a == 1 else f"x^{a}"),
                    "" if b == 0 else ("D" if b == 1 else f"D^{b}"),
                ) if s
            )
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def weyl_normalize(factors: Iterable[tuple[int, int]]) -> WeylElem:
    """Normal form of the formal product ``x^a1 D^b1 * x^a2 D^b2 * ...``."""
    result = WeylElem.constant(1)
    for a, b in factors:
        result = result * WeylElem.monomial(a, b)
    return result


def weyl_ad_preimage(s: WeylElem) -> WeylElem:
    """Return ``g`` with ``D g - g D = s``: integrate each coefficient polynomial in ``x``."""
    return WeylElem._raw({(a + 1, b): v / (a + 1) for (a, b), v in s._c.items()})


X = WeylElem.monomial(1, 0)
D = WeylElem.monomial(0, 1)


@dataclass(frozen=True)
class WeylAlgebra(Ring):
    kind = "Weyl"
    commutative = False
    is_field = False

    def __str__(self):
        return "Weyl"

    def zero(self):
        return WeylElem()

    def one(self):
        return WeylElem.constant(1)

    def from_int(self, value):
        return WeylElem.constant(value)

    def x(self):
        return X

    def d(self):
        return D

    def contains(self, element):
        return isinstance(element, WeylElem)

    def is_central(self, element):
        # the center of A_1 over a field of characteristic zero is the field
        return element.is_constant()

    def random(self, rng, max_degree=4, max_terms=5, bound=5, den=3, **caps):
        coeffs = {}
        for _ in range(rng.randint(0, max_terms)):
            total = rng.randint(0, max_degree)
            a = rng.randint(0, total)
            coeffs[(a, total - a)] = Fraction(rng.randint(-bound, bound), rng.randint(1, den))
        return WeylElem(coeffs)

    def encode(self, element):
        return [[a, b, f"{v.numerator}/{v.denominator}"] for (a, b), v in element.terms]

    def decode(self, obj):
        if not isinstance(obj, list):
            raise ValueError(f"Weyl element must be a list of [a, b, coeff] triples, got {obj!r}")
        coeffs = {}
        for item in obj:
            if not (isinstance(item, list) and len(item) == 3):
                raise ValueError(f"bad Weyl monomial {item!r}")
            a, b, v = item
            if not (isinstance(a, int) and isinstance(b, int)) or a < 0 or b < 0:
                raise ValueError(f"bad Weyl exponents in {item!r}")
            if (a, b) in coeffs:
                raise ValueError(f"repeated Weyl monomial {(a, b)}")
            coeffs[(a, b)] = Fraction(v)
        return WeylElem(coeffs)

    def to_json(self):
        return {"kind": self.kind}

