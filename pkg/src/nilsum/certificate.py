"""Certificate data model and its canonical JSON encoding.

Everything here is plain data over ring-core values.  Decomposers build
these objects; :mod:`nilsum.verify` reads them back without importing any
decomposer code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .core import Matrix, Ring, ring_from_json
from .errors import CertificateError

FORMAT_VERSION = 1

LEMMAS = ("corollary", "polysum3", "polysum4", "subrings", "truss", "nilpotentsum", "squarezerosum")


@dataclass(frozen=True)
class CommutatorWitness:
    """``sum_i (x_i y_i - y_i x_i) == target``, stored as explicit pairs."""

    ring: Ring
    pairs: tuple
    target: Any
    seed: int | None = None

    @property
    def k(self) -> int:
        return len(self.pairs)

    def to_json(self) -> dict:
        enc = self.ring.encode
        out = {
            "ring": self.ring.to_json(),
            "pairs": [[enc(x), enc(y)] for x, y in self.pairs],
            "target": enc(self.target),
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, obj, ring: Ring | None = None) -> "CommutatorWitness":
        try:
            ring = ring_from_json(obj["ring"]) if "ring" in obj else ring
            if ring is None:
                raise CertificateError("witness has no ring")
            pairs = tuple((ring.decode(x), ring.decode(y)) for x, y in obj["pairs"])
            return cls(ring, pairs, ring.decode(obj["target"]), obj.get("seed"))
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed witness: {exc}") from exc


@dataclass(frozen=True)
class PolySpec:
    """Monic cubic ``(X - a)(X - b)(X - c)`` given by its roots."""

    roots: tuple

    def __post_init__(self):
        if len(self.roots) != 3:
            raise ValueError("a cubic needs exactly three roots")

    def root_sum(self, ring: Ring):
        total = ring.zero()
        for r in self.roots:
            total = total + r
        return total


# per-term claims ------------------------------------------------------------


@dataclass(frozen=True)
class NilpotentIndex:
    index: int


@dataclass(frozen=True)
class AnnihilatedBy:
    poly: PolySpec


@dataclass(frozen=True)
class StrictUpper:
    pass


@dataclass(frozen=True)
class StrictLower:
    pass


@dataclass(frozen=True)
class ConjugatedStrictUpper:
    """Term equals ``U T U^-1`` with ``T`` strictly upper triangular."""

    U: Matrix
    U_inv: Matrix


@dataclass(frozen=True)
class UpperWithDiagonal:
    diag: tuple


@dataclass(frozen=True)
class LowerWithDiagonal:
    diag: tuple


@dataclass(frozen=True)
class ConjugatedUpperWithDiagonal:
    U: Matrix
    U_inv: Matrix
    diag: tuple


@dataclass(frozen=True)
class Unipotent:
    """Term minus the identity satisfies ``inner`` (a subring membership claim)."""

    inner: Any


@dataclass
class Decomposition:
    lemma: str
    ring: Ring
    input: Matrix
    terms: list
    claims: list
    witnesses: list = field(default_factory=list)
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.input.n

    def total(self) -> Matrix:
        acc = Matrix.zeros(self.ring, self.n)
        for t in self.terms:
            acc = acc + t
        return acc

    def to_json(self) -> dict:
        return certificate_to_json(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def claim_to_json(claim, ring: Ring) -> dict:
    enc = ring.encode
    if isinstance(claim, NilpotentIndex):
        return {"type": "nilpotent", "index": claim.index}
    if isinstance(claim, AnnihilatedBy):
        return {"type": "annihilated", "roots": [enc(r) for r in claim.poly.roots]}
    if isinstance(claim, StrictUpper):
        return {"type": "strict_upper"}
    if isinstance(claim, StrictLower):
        return {"type": "strict_lower"}
    if isinstance(claim, ConjugatedStrictUpper):
        return {"type": "conjugated_strict_upper", "U": claim.U.to_json(), "U_inv": claim.U_inv.to_json()}
    if isinstance(claim, UpperWithDiagonal):
        return {"type": "upper", "diag": [enc(v) for v in claim.diag]}
    if isinstance(claim, LowerWithDiagonal):
        return {"type": "lower", "diag": [enc(v) for v in claim.diag]}
    if isinstance(claim, ConjugatedUpperWithDiagonal):
        return {"type": "conjugated_upper", "U": claim.U.to_json(), "U_inv": claim.U_inv.to_json(),
                "diag": [enc(v) for v in claim.diag]}
    if isinstance(claim, Unipotent):
        return {"type": "unipotent", "of": claim_to_json(claim.inner, ring)}
    raise TypeError(f"unknown claim {claim!r}")


def claim_from_json(obj, ring: Ring):
    dec = ring.decode
    t = obj["type"]
    if t == "nilpotent":
        index = obj["index"]
        if not isinstance(index, int) or index < 1:
            raise ValueError(f"bad nilpotency index {index!r}")
        return NilpotentIndex(index)
    if t == "annihilated":
        return AnnihilatedBy(PolySpec(tuple(dec(r) for r in obj["roots"])))
    if t == "strict_upper":
        return StrictUpper()
    if t == "strict_lower":
        return StrictLower()
    if t == "conjugated_strict_upper":
        return ConjugatedStrictUpper(Matrix.from_json(ring, obj["U"]), Matrix.from_json(ring, obj["U_inv"]))
    if t == "upper":
        return UpperWithDiagonal(tuple(dec(v) for v in obj["diag"]))
    if t == "lower":
        return LowerWithDiagonal(tuple(dec(v) for v in obj["diag"]))
    if t == "conjugated_upper":
        return ConjugatedUpperWithDiagonal(Matrix.from_json(ring, obj["U"]), Matrix.from_json(ring, obj["U_inv"]),
                                           tuple(dec(v) for v in obj["diag"]))
    if t == "unipotent":
        return Unipotent(claim_from_json(obj["of"], ring))
    raise ValueError(f"unknown claim type {t!r}")


def certificate_to_json(d: Decomposition) -> dict:
    out = {
        "version": FORMAT_VERSION,
        "lemma": d.lemma,
        "ring": d.ring.to_json(),
        "input": d.input.to_json(),
        "terms": [t.to_json() for t in d.terms],
        "claims": [claim_to_json(c, d.ring) for c in d.claims],
        "witness": [w.to_json() for w in d.witnesses],
        "seed": d.seed,
    }
    out.update(d.extra)
    return out


def certificate_from_json(obj) -> Decomposition:
    if not isinstance(obj, dict):
        raise CertificateError("certificate must be a JSON object")
    try:
        lemma = obj["lemma"]
        if lemma not in LEMMAS:
            raise ValueError(f"unknown lemma {lemma!r}")
        ring = ring_from_json(obj["ring"])
        original = Matrix.from_json(ring, obj["input"])
        terms = [Matrix.from_json(ring, t) for t in obj["terms"]]
        if any(t.n != original.n for t in terms):
            raise ValueError("term size differs from input size")
        claims = [claim_from_json(c, ring) for c in obj["claims"]]
        witnesses = [CommutatorWitness.from_json(w, ring) for w in obj.get("witness", [])]
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
    known = {"version", "lemma", "ring", "input", "terms", "claims", "witness", "seed"}
    extra = {k: v for k, v in obj.items() if k not in known}
    return Decomposition(lemma, ring, original, terms, claims, witnesses, obj.get("seed"), extra)


def loads(text: str) -> Decomposition:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not JSON: {exc}") from exc
    return certificate_from_json(obj)
