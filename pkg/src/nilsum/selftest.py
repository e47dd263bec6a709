"""Randomized acceptance suite, shared by ``nilsum selftest`` and the test-suite."""

from __future__ import annotations

import io
import itertools
import json
import random
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .certificate import CommutatorWitness, PolySpec, loads
from .core import QQ, WEYL, Matrix, MatrixRing, PrimeField, Ring, flatten
from .decomp3 import build_U, build_U_inv, poly_sum_3, poly_sum_4, three_nilpotent_subrings, truss_decompose
from .decompn import nilpotent_sum, nk_sequence, squarezero_sum
from .errors import InfeasibleError
from .verify import check_nilpotent, check_subring_membership, check_truss_identity, verify_certificate
from .witnesses import split_k_commutators, trace_zero_witness, weyl_oracle

F2, F7, F13 = PrimeField(2), PrimeField(7), PrimeField(13)
M2Q = MatrixRing(2, QQ)

# configured cubics for the four-term sum over M_2(Q); root total 9/2, so feasibility is tr(flatten(A)) == 9
POLYSUM4_ROOTS = ((0, 0, 0), (1, 0, -1), (2, -1, Fraction(1, 2)), (1, 1, 1))


@dataclass
class CriterionResult:
    name: str
    ok: bool
    detail: str
    elapsed: float
    budget: float

    @property
    def in_budget(self) -> bool:
        return self.elapsed < self.budget

    @property
    def passed(self) -> bool:
        return self.ok and self.in_budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.elapsed:.1f}s/{self.budget:.0f}s" + ("" if self.in_budget else " over budget")
        return f"{status}  {self.name}: {self.detail} [{timing}]"


def _timed(name: str, budget: float, fn, *args) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn(*args)
    return CriterionResult(name, ok, detail, time.perf_counter() - t0, budget)


def _log2(n: int) -> int:
    return n.bit_length() - 1


def random_trace_zero(ring: Ring, n: int, rng: random.Random) -> Matrix:
    a = Matrix.random(ring, n, rng)
    return a.replace({(n - 1, n - 1): a[n - 1, n - 1] - a.trace()})


def random_commuting_witness(ring: Ring, k: int, rng: random.Random) -> CommutatorWitness:
    """``k`` random pairs; over a commutative ring their commutators vanish."""
    pairs = tuple((ring.random(rng), ring.random(rng)) for _ in range(k))
    return CommutatorWitness(ring, pairs, ring.zero())


def _sum_sample(rng: random.Random):
    ring = rng.choice((QQ, F13))
    n = rng.randint(3, 32)
    k = rng.randint(1, 3)
    return ring, n, k, random_trace_zero(ring, n, rng), random_commuting_witness(ring, k, rng)


def _sums_to(terms, A: Matrix) -> bool:
    total = Matrix.zeros(A.ring, A.n)
    for t in terms:
        total = total + t
    return total == A


# 1 ---------------------------------------------------------------------------


def nilpotent_count(count: int, seed: int, literal: bool = True):
    """Term count, exact sum, and (literal) ``M^3 = 0`` for every term or (claimed) each certificate claim."""
    rng = random.Random(seed)
    bad_count = bad_sum = bad_nil = 0
    first_bad = None
    for _ in range(count):
        ring, n, k, A, w = _sum_sample(rng)
        d = nilpotent_sum(A, w)
        bad_count += len(d.terms) != _log2(n) + k + 2
        bad_sum += not _sums_to(d.terms, A)
        if literal:
            failing = [i for i, t in enumerate(d.terms) if not check_nilpotent(t, 3).ok]
        else:
            report = verify_certificate(loads(d.dumps()), original=A)
            failing = [] if report.overall else ["report"]
        if failing:
            bad_nil += 1
            first_bad = first_bad or f"{ring} n={n} k={k} terms {failing}"
    ok = bad_count == bad_sum == bad_nil == 0
    what = "M^3 != 0" if literal else "claim failures"
    detail = f"{count} samples: count errors {bad_count}, sum errors {bad_sum}, {what} in {bad_nil}"
    if first_bad:
        detail += f" (first: {first_bad})"
    return ok, detail


# 2 ---------------------------------------------------------------------------


def squarezero_count(count: int, seed: int):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        ring, n, k, A, w = _sum_sample(rng)
        d = squarezero_sum(A, w)
        ok = len(d.terms) == _log2(n) + 2 * k + 2 * (n - 1)
        ok = ok and _sums_to(d.terms, A) and all((t * t).is_zero() for t in d.terms)
        bad += not ok
    return bad == 0, f"{count} samples, {bad} failures"


# 3 ---------------------------------------------------------------------------


def _poly3_case(A: Matrix, poly: PolySpec, ident_power) -> bool:
    ring = A.ring
    w = split_k_commutators(A.trace() - 3 * poly.root_sum(ring), 1, ring)
    d = poly_sum_3(A, [poly] * 3, w)
    return _sums_to(d.terms, A) and len(d.terms) == 3 and all(t ** 3 == ident_power for t in d.terms)


def order_three(count: int, seed: int):
    rng = random.Random(seed)
    cube_roots = PolySpec(tuple(F7.cube_roots_of_unity()))
    zero_roots = PolySpec((F7.zero(),) * 3)
    ident, zero = Matrix.identity(F7, 3), Matrix.zeros(F7, 3)
    bad_unit = bad_nil = 0
    for _ in range(count):
        # both root sets add to 0 mod 7, so feasibility means trace zero
        A = random_trace_zero(F7, 3, rng)
        bad_unit += not _poly3_case(A, cube_roots, ident)
        bad_nil += not _poly3_case(A, zero_roots, zero)
    return bad_unit == bad_nil == 0, f"{count} matrices over F7: X^3-1 failures {bad_unit}, X^3 failures {bad_nil}"


# 4 ---------------------------------------------------------------------------


def polysum4_polys():
    return [PolySpec(tuple(M2Q.scalar(Fraction(r)) for r in roots)) for roots in POLYSUM4_ROOTS]


def _flat_annihilated(B: Matrix, poly: PolySpec) -> bool:
    F = flatten(B)
    ident = Matrix.identity(QQ, F.n)
    prod = ident
    for root in poly.roots:
        prod = prod * (F - ident * root[0, 0])
    return prod.is_zero()


def feasible_m2q(rng: random.Random, target) -> Matrix:
    A = Matrix.random(M2Q, 3, rng)
    fix = Matrix.from_entries(QQ, 2, {(0, 0): target - flatten(A).trace()})
    return A.replace({(0, 0): A[0, 0] + fix})


def polysum4_shadow(count: int, seed: int, rejections: int):
    from .cli import EXIT_INFEASIBLE, JobConfig, run
    rng = random.Random(seed)
    polys = polysum4_polys()
    target = M2Q.m * sum(Fraction(r) for roots in POLYSUM4_ROOTS for r in roots)
    bad = 0
    for _ in range(count):
        A = feasible_m2q(rng, target)
        d = poly_sum_4(A, polys, seed=seed)
        ok = len(d.terms) == 4 and _sums_to(d.terms, A)
        ok = ok and all(_flat_annihilated(t, p) for t, p in zip(d.terms, polys))
        bad += not ok
    rejected = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(rejections):
            A = feasible_m2q(rng, target + rng.choice((-1, 1)) * rng.randint(1, 5))
            path = Path(tmp) / f"a{i}.json"
            path.write_text(json.dumps(A.to_json()))
            polys_arg = [f"[{';'.join(str(r) for r in roots)}]" for roots in POLYSUM4_ROOTS]
            cfg = JobConfig("polysum4", input=path, ring=M2Q, polys=polys_arg, seed=seed)
            code = run(cfg, out=io.StringIO())
            rejected += code == EXIT_INFEASIBLE
    ok = bad == 0 and rejected == rejections
    return ok, f"{count} feasible: {bad} failures; infeasible rejected with exit 3: {rejected}/{rejections}"


# 5 ---------------------------------------------------------------------------


def _weyl_matrix(rng: random.Random, **kw) -> Matrix:
    return Matrix(WEYL, [[WEYL.random(rng, **kw) for _ in range(3)] for _ in range(3)])


def _subring_sample(kind: str, rng: random.Random, U: Matrix, U_inv: Matrix) -> Matrix:
    m = _weyl_matrix(rng, max_degree=2, max_terms=2, bound=3, den=2)
    if kind == "lower":
        return m.strict_lower()
    upper = m.strict_upper()
    return U * upper * U_inv if kind == "conj" else upper


def weyl_subrings(count: int, samples: int, seed: int):
    from .certificate import ConjugatedStrictUpper, StrictLower, StrictUpper
    rng = random.Random(seed)
    oracle = weyl_oracle()
    bad_dec = bad_truss = 0
    for _ in range(count):
        A = _weyl_matrix(rng, max_degree=4, max_terms=3)
        d = three_nilpotent_subrings(A, oracle)
        bad_dec += not verify_certificate(d, original=A).overall
        t = truss_decompose(A, oracle)
        k, l, m = t.terms
        bad_truss += not (check_truss_identity(k, l, m, A) and verify_certificate(t, original=A).overall)
    U, U_inv = build_U(WEYL, oracle.r), build_U_inv(WEYL, oracle.r)
    claims = {"upper": StrictUpper(), "lower": StrictLower(), "conj": ConjugatedStrictUpper(U, U_inv)}
    bad_ring = 0
    for i in range(samples):
        kind = ("upper", "lower", "conj")[i % 3]
        x, y, z = (_subring_sample(kind, rng, U, U_inv) for _ in range(3))
        claim = claims[kind]
        closed = all(check_subring_membership(v, claim) for v in (x + y, x - y, x * y, -x))
        bad_ring += not (closed and (x * y * z).is_zero())
    ok = bad_dec == bad_truss == bad_ring == 0
    return ok, (f"{count} Weyl matrices: decomposition failures {bad_dec}, truss failures {bad_truss}; "
                f"{samples} subring samples: {bad_ring} failures")


# 6 ---------------------------------------------------------------------------


def nk_closed_form(limit: int):
    bad = [n for n in range(1, limit + 1) if nk_sequence(n)[-1] != (1 if n & (n - 1) == 0 else 2)]
    return not bad, f"n in [1, {limit}]: {len(bad)} mismatches" + (f" (first {bad[0]})" if bad else "")


# 7 ---------------------------------------------------------------------------


def _all_2x2(field: Ring):
    for vals in itertools.product(field.elements(), repeat=4):
        yield Matrix(field, [list(vals[:2]), list(vals[2:])])


def brute_force_f2():
    mats = list(_all_2x2(F2))
    commutators = {x * y - y * x for x in mats for y in mats}
    ident = Matrix.identity(F2, 2)
    rejected, bad_witness = [], 0
    trace_zero = [a for a in mats if not a.trace()]
    for A in trace_zero:
        try:
            w = trace_zero_witness(A)
        except InfeasibleError:
            rejected.append(A)
            continue
        (x, y), = w.pairs
        bad_witness += not (A in commutators and x * y - y * x == A)
    square_zero = [m for m in mats if (m * m).is_zero()]
    valid = {}
    for combo in itertools.product(square_zero, repeat=5):
        total = combo[0] + combo[1] + combo[2] + combo[3] + combo[4]
        valid.setdefault(total, set()).add(combo)
    bad_sz = checked = 0
    for A in trace_zero:
        for x, y in itertools.product(F2.elements(), repeat=2):
            w = CommutatorWitness(F2, ((x, y),), F2.zero())
            d = squarezero_sum(A, w)
            checked += 1
            bad_sz += tuple(d.terms) not in valid.get(A, set())
    ok = bad_witness == 0 and bad_sz == 0 and rejected == [ident]
    return ok, (f"{len(commutators)} commutators by brute force; {len(trace_zero) - len(rejected)} witnesses, "
                f"{bad_witness} outside the set, rejected {len(rejected)} (identity only: {rejected == [ident]}); "
                f"{checked} square-zero sums, {bad_sz} outside the brute-force set")


# 8 ---------------------------------------------------------------------------


def _certificate_pool(rng: random.Random):
    A = random_trace_zero(QQ, rng.randint(3, 10), rng)
    yield nilpotent_sum(A, random_commuting_witness(QQ, rng.randint(1, 3), rng))
    A = random_trace_zero(F13, rng.randint(2, 10), rng)
    yield squarezero_sum(A, random_commuting_witness(F13, rng.randint(1, 3), rng))
    A = random_trace_zero(F7, 3, rng)
    cube_roots = PolySpec(tuple(F7.cube_roots_of_unity()))
    yield poly_sum_3(A, [cube_roots] * 3, split_k_commutators(F7.zero(), 1, F7))
    yield poly_sum_4(feasible_m2q(rng, Fraction(9)), polysum4_polys())
    A = _weyl_matrix(rng, max_degree=2, max_terms=2)
    yield three_nilpotent_subrings(A, weyl_oracle())
    yield truss_decompose(A, weyl_oracle())


def _nonzero(ring: Ring, rng: random.Random):
    while True:
        v = ring.random(rng)
        if v:
            return v


def tamper_detection(count: int, seed: int):
    rng = random.Random(seed)
    pool = list(_certificate_pool(rng))
    caught = 0
    kinds = {}
    for _ in range(count):
        d = loads(rng.choice(pool).dumps())
        i = rng.randrange(len(d.terms))
        r, c = rng.randrange(d.n), rng.randrange(d.n)
        t = d.terms[i]
        d.terms[i] = t.replace({(r, c): t[r, c] + _nonzero(d.ring, rng)})
        report = verify_certificate(loads(d.dumps()))
        caught += not report.overall
        kinds[d.lemma] = kinds.get(d.lemma, 0) + 1
    spread = ", ".join(f"{k} {v}" for k, v in sorted(kinds.items()))
    return caught == count, f"{caught}/{count} perturbations rejected ({spread})"


# driver ----------------------------------------------------------------------


def criteria(seed: int = 0, quick: bool = False):
    """``(name, budget_seconds, fn, args)`` per acceptance criterion."""
    s = 10 if quick else 1
    return [
        ("1 nilpotent count, every term cubes to zero", 30, nilpotent_count, (200 // s, seed, True)),
        ("1b nilpotent count, every term meets its claimed index", 30, nilpotent_count, (200 // s, seed, False)),
        ("2 square-zero count", 30, squarezero_count, (200 // s, seed)),
        ("3 order-three and cube-zero sums over F7", 10, order_three, (100 // s, seed)),
        ("4 four-term sums over M_2(Q)", 20, polysum4_shadow, (100 // s, seed, 100 // s)),
        ("5 Weyl subrings and truss", 60, weyl_subrings, (100 // s, 1000 // s, seed)),
        ("6 n_k closed form", 5, nk_closed_form, (2 ** (20 if not quick else 12),)),
        ("7 F2 brute-force oracle", 60, brute_force_f2, ()),
        ("8 tamper detection", 10, tamper_detection, (100 // s, seed)),
    ]


def run_criterion(name: str, seed: int = 0, quick: bool = False) -> CriterionResult:
    for full, budget, fn, args in criteria(seed, quick):
        if full.split()[0] == name:
            return _timed(full, budget, fn, *args)
    raise KeyError(name)


def run_selftest(seed: int = 0, quick: bool = False, out=sys.stdout) -> list[CriterionResult]:
    results = []
    for name, budget, fn, args in criteria(seed, quick):
        res = _timed(name, budget, fn, *args)
        print(res.line(), file=out, flush=True)
        results.append(res)
    return results
