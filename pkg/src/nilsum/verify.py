"""Independent certificate checker.

Only ring-core arithmetic and the certificate data model are used here, so
a bug in a decomposer cannot vouch for its own output.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .certificate import (
    AnnihilatedBy, ConjugatedStrictUpper, ConjugatedUpperWithDiagonal, Decomposition, LowerWithDiagonal,
    NilpotentIndex, PolySpec, StrictLower, StrictUpper, Unipotent, UpperWithDiagonal, certificate_from_json,
)
from .core import Matrix, Ring
from .errors import RingMismatchError, ShapeError


@dataclass
class NilpotencyCheck:
    ok: bool
    strict: bool      # M^(e-1) != 0, i.e. the index is exactly e
    detail: str = ""

    def __bool__(self):
        return self.ok


def _first_nonzero(m: Matrix):
    return next(((i, j) for i, j, v in m.entries() if v), None)


def check_nilpotent(M: Matrix, e: int) -> NilpotencyCheck:
    if e < 1:
        raise ValueError("index must be positive")
    below = Matrix.identity(M.ring, M.n)
    for _ in range(e - 1):
        below = below * M
    top = below * M
    bad = _first_nonzero(top)
    strict = not below.is_zero()
    if bad is not None:
        return NilpotencyCheck(False, strict, f"entry {bad} of M^{e} is nonzero")
    return NilpotencyCheck(True, strict, f"M^{e} = 0" + ("" if strict else f", M^{e - 1} = 0 as well"))


def _shifted(M: Matrix, root) -> Matrix:
    return M.replace({(i, i): M[i, i] - root for i in range(M.n)})


def check_annihilated(M: Matrix, poly: PolySpec) -> bool:
    a, b, c = poly.roots
    return (_shifted(M, a) * _shifted(M, b) * _shifted(M, c)).is_zero()


def _inverse_pair_ok(U: Matrix, U_inv: Matrix) -> bool:
    ident = Matrix.identity(U.ring, U.n)
    return U.n == U_inv.n and U * U_inv == ident and U_inv * U == ident


def check_subring_membership(M: Matrix, claim) -> bool:
    if isinstance(claim, StrictUpper):
        return M.is_strict_upper()
    if isinstance(claim, StrictLower):
        return M.is_strict_lower()
    if isinstance(claim, ConjugatedStrictUpper):
        if claim.U is None or claim.U_inv is None:
            raise ValueError("conjugated claim needs both U and its inverse")
        return _inverse_pair_ok(claim.U, claim.U_inv) and (claim.U_inv * M * claim.U).is_strict_upper()
    raise TypeError(f"{claim!r} is not a subring claim")


def check_truss_identity(k: Matrix, l: Matrix, m: Matrix, A: Matrix) -> bool:
    ident = Matrix.identity(A.ring, A.n)
    if k - l + m != A:
        return False
    return all(check_nilpotent(x - ident, 3).ok for x in (k, l, m))


def _triangular_with_diag(M: Matrix, diag, upper: bool) -> bool:
    shape = M.is_upper() if upper else M.is_lower()
    return shape and M.diag() == tuple(diag)


def check_claim(M: Matrix, claim) -> tuple[bool, str]:
    if isinstance(claim, NilpotentIndex):
        res = check_nilpotent(M, claim.index)
        return res.ok, res.detail
    if isinstance(claim, AnnihilatedBy):
        ok = check_annihilated(M, claim.poly)
        return ok, "p(M) = 0" if ok else "p(M) != 0"
    if isinstance(claim, (StrictUpper, StrictLower, ConjugatedStrictUpper)):
        ok = check_subring_membership(M, claim)
        return ok, "member" if ok else "not a member"
    if isinstance(claim, UpperWithDiagonal):
        ok = _triangular_with_diag(M, claim.diag, True)
        return ok, "upper with stated diagonal" if ok else "shape or diagonal differs"
    if isinstance(claim, LowerWithDiagonal):
        ok = _triangular_with_diag(M, claim.diag, False)
        return ok, "lower with stated diagonal" if ok else "shape or diagonal differs"
    if isinstance(claim, ConjugatedUpperWithDiagonal):
        ok = _inverse_pair_ok(claim.U, claim.U_inv) and _triangular_with_diag(claim.U_inv * M * claim.U, claim.diag, True)
        return ok, "conjugate is upper with stated diagonal" if ok else "conjugate check failed"
    if isinstance(claim, Unipotent):
        s = M - Matrix.identity(M.ring, M.n)
        inner_ok, detail = check_claim(s, claim.inner)
        cube = check_nilpotent(s, 3)
        ok = inner_ok and cube.ok
        return ok, f"M - 1: {detail}; {cube.detail}"
    return False, f"unknown claim {claim!r}"


@dataclass
class TermResult:
    claim: str
    ok: bool
    detail: str


@dataclass
class VerificationReport:
    sum_ok: bool
    per_term: list
    counts_ok: bool
    witness_ok: bool
    messages: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return self.sum_ok and self.counts_ok and self.witness_ok and all(t.ok for t in self.per_term)

    def to_json(self) -> dict:
        out = asdict(self)
        out["overall"] = self.overall
        return out

    def summary(self) -> str:
        bad = sum(not t.ok for t in self.per_term)
        return (f"sum={'ok' if self.sum_ok else 'FAIL'} counts={'ok' if self.counts_ok else 'FAIL'} "
                f"witness={'ok' if self.witness_ok else 'FAIL'} claims={len(self.per_term) - bad}/{len(self.per_term)} "
                f"overall={'PASS' if self.overall else 'FAIL'}")


def _sum(ring: Ring, items):
    total = ring.zero()
    for v in items:
        total = total + v
    return total


def _commutators(ring: Ring, pairs):
    return _sum(ring, (x * y - y * x for x, y in pairs))


def _claim_kinds(claims) -> list:
    return [type(c).__name__ + (f"({c.index})" if isinstance(c, NilpotentIndex) else "")
            + (f"[{type(c.inner).__name__}]" if isinstance(c, Unipotent) else "") for c in claims]


def _log2(n: int) -> int:
    return n.bit_length() - 1


def _expected(d: Decomposition, messages: list):
    """Expected claim kinds and the element the witnesses must sum to, per certificate kind."""
    ring, A, n = d.ring, d.input, d.n
    tr = A.trace()
    ws = d.witnesses
    k = ws[0].k if len(ws) == 1 else None
    if d.lemma == "corollary":
        diag_total = _sum(ring, (v for c in d.claims for v in getattr(c, "diag", ())))
        return ["ConjugatedUpperWithDiagonal", "UpperWithDiagonal", "LowerWithDiagonal"], [tr - diag_total], 1
    if d.lemma in ("polysum3", "polysum4"):
        roots = _sum(ring, (r for c in d.claims if isinstance(c, AnnihilatedBy) for r in c.poly.roots))
        count = 3 if d.lemma == "polysum3" else 4
        return ["AnnihilatedBy"] * count, [tr - roots], count - 2
    if d.lemma == "subrings":
        return ["StrictUpper", "StrictLower", "ConjugatedStrictUpper"], [tr], 1
    if d.lemma == "truss":
        kinds = ["Unipotent[StrictUpper]", "Unipotent[StrictLower]", "Unipotent[ConjugatedStrictUpper]"]
        return kinds, [tr - ring.from_int(n)], 1
    if d.lemma in ("nilpotentsum", "squarezerosum"):
        formula = d.extra.get("count_formula", {})
        if k is None:
            messages.append("expected exactly one k-pair witness")
            return None, [tr], None
        m = _log2(n)
        if formula.get("log2") != m or formula.get("k") != k:
            messages.append(f"declared count formula {formula} disagrees with n={n}, k={k}")
            return None, [tr], None
        if d.lemma == "nilpotentsum":
            if n < 3:
                messages.append("nilpotent sums need n >= 3")
                return None, [tr], None
            return ["NilpotentIndex(2)"] * m + ["NilpotentIndex(3)"] * k + ["StrictUpper", "StrictLower"], [tr], None
        return ["NilpotentIndex(2)"] * (m + 2 * k + 2 * (n - 1)), [tr], None
    messages.append(f"unknown lemma {d.lemma!r}")
    return None, [tr], None


def verify_certificate(d: Decomposition, original: Matrix | None = None) -> VerificationReport:
    messages = []
    ring = d.ring
    try:
        if d.lemma == "truss" and len(d.terms) == 3:
            k, l, m = d.terms
            combined = k - l + m
        else:
            combined = Matrix.zeros(ring, d.n)
            for t in d.terms:
                combined = combined + t
        sum_ok = combined == d.input
    except (ShapeError, RingMismatchError) as exc:
        sum_ok = False
        messages.append(f"terms cannot be combined: {exc}")
    if original is not None and original != d.input:
        messages.append("certificate input differs from the supplied original")
        sum_ok = False

    per_term = []
    for term, claim in zip(d.terms, d.claims):
        try:
            ok, detail = check_claim(term, claim)
        except (TypeError, ValueError, ArithmeticError, ShapeError) as exc:
            ok, detail = False, f"check raised {exc}"
        per_term.append(TermResult(_claim_kinds([claim])[0], ok, detail))

    expected, targets, n_witnesses = _expected(d, messages)
    counts_ok = expected is not None and len(d.terms) == len(d.claims) == len(expected)
    counts_ok = counts_ok and _claim_kinds(d.claims) == expected
    if expected is not None and not counts_ok:
        messages.append(f"claims {_claim_kinds(d.claims)} do not match the expected pattern {expected}")

    witness_ok = bool(d.witnesses)
    if n_witnesses is not None and len(d.witnesses) != n_witnesses:
        witness_ok = False
    total_target = ring.zero()
    for w in d.witnesses:
        if w.ring != ring:
            witness_ok = False
            messages.append("witness ring differs from certificate ring")
            continue
        if _commutators(ring, w.pairs) != w.target:
            witness_ok = False
            messages.append("witness pairs do not sum to their target")
        total_target = total_target + w.target
        if d.lemma in ("corollary", "polysum3", "polysum4", "subrings", "truss") and w.k != 1:
            witness_ok = False
    if witness_ok and total_target != targets[0]:
        witness_ok = False
        messages.append("witness target does not match the trace condition of the input")
    return VerificationReport(sum_ok, per_term, counts_ok, witness_ok, messages)


def verify_json(obj) -> VerificationReport:
    return verify_certificate(certificate_from_json(obj))


def report_json(report: VerificationReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=1)
