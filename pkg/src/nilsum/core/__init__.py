"""Exact arithmetic for every coefficient ring nilsum supports."""

from __future__ import annotations

import re

from .fields import Fp, PrimeField, Rationals, Ring, is_prime
from .matrix import Matrix, MatrixRing, flatten, mat_inverse_commutative, rank, row_reduce, unflatten
from .weyl import D, X, WeylAlgebra, WeylElem, weyl_ad_preimage, weyl_normalize

QQ = Rationals()
WEYL = WeylAlgebra()

__all__ = [
    "D", "Fp", "Matrix", "MatrixRing", "PrimeField", "QQ", "Rationals", "Ring", "WEYL", "WeylAlgebra",
    "WeylElem", "X", "flatten", "is_prime", "mat_inverse_commutative", "parse_ring", "rank",
    "ring_from_json", "row_reduce", "unflatten", "weyl_ad_preimage", "weyl_normalize",
]

_FIELD = re.compile(r"^(?:F_?|GF\(|Fp\()(\d+)\)?$")
_MATRIX = re.compile(r"^M_?\(?(\d+)\s*,\s*(.+?)\)?$")


def parse_ring(text: str) -> Ring:
    """Parse the CLI shorthand: ``Q``, ``F7`` / ``GF(7)``, ``M(2,Q)``, ``M(3,F5)``, ``Weyl``."""
    s = text.strip()
    if s in ("Q", "QQ", "Rational", "Rationals"):
        return QQ
    if s in ("Weyl", "A1", "A_1"):
        return WEYL
    m = _FIELD.match(s)
    if m:
        return PrimeField(int(m.group(1)))
    m = _MATRIX.match(s)
    if m:
        base = parse_ring(m.group(2))
        return MatrixRing(int(m.group(1)), base)
    raise ValueError(f"unrecognised ring {text!r}")


def ring_from_json(obj) -> Ring:
    if isinstance(obj, str):
        return parse_ring(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"bad ring spec {obj!r}")
    kind = obj["kind"]
    if kind == "Rational":
        return QQ
    if kind == "PrimeField":
        return PrimeField(int(obj["p"]))
    if kind == "MatrixRing":
        return MatrixRing(int(obj["m"]), ring_from_json(obj["base"]))
    if kind == "Weyl":
        return WEYL
    raise ValueError(f"unknown ring kind {kind!r}")
