"""``nilsum`` command-line front end.

Exit codes: 0 success (certificate verified), 1 verification failure,
2 unreadable input, 3 infeasible decomposition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .certificate import CommutatorWitness, PolySpec, loads
from .core import Matrix, MatrixRing, PrimeField, Ring, parse_ring, ring_from_json
from .decomp3 import corollary_decompose, poly_sum_3, poly_sum_4, three_nilpotent_subrings, truss_decompose
from .decompn import nilpotent_sum, squarezero_sum
from .errors import CertificateError, InfeasibleError, NilsumError, ShapeError, WitnessMismatchError
from .verify import report_json, verify_certificate
from .witnesses import split_k_commutators, weyl_oracle

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_INFEASIBLE = 0, 1, 2, 3

COMMANDS = ("decompose3", "polysum3", "polysum4", "subrings", "truss", "nilpotentsum", "squarezerosum",
            "verify", "selftest")
POLY_COUNT = {"polysum3": 3, "polysum4": 4}


class ParseError(NilsumError):
    pass


@dataclass
class JobConfig:
    command: str
    input: Path | None = None
    ring: Ring | None = None
    output: Path | None = None
    seed: int = 0
    polys: list = field(default_factory=list)
    k: int = 1
    witness: Path | None = None
    targets: Path | None = None
    quick: bool = False


def default_seed() -> int:
    return int(os.environ.get("NILSUM_SEED", "0"))


def _scalar(ring: Ring, value):
    return ring.scalar(value) if isinstance(ring, MatrixRing) else value


def _scalar_base(ring: Ring) -> Ring:
    return ring.base if isinstance(ring, MatrixRing) else ring


def parse_poly(text: str, ring: Ring) -> PolySpec:
    """``X3`` (roots 0,0,0), ``X3-1`` (cube roots of unity over F_p, p = 1 mod 3) or ``[a;b;c]``."""
    base = _scalar_base(ring)
    s = text.strip().replace(" ", "")
    if s in ("X3", "X^3"):
        z = base.zero()
        return PolySpec(tuple(_scalar(ring, z) for _ in range(3)))
    if s in ("X3-1", "X^3-1"):
        if not isinstance(base, PrimeField):
            raise ParseError(f"X3-1 needs a prime field with p = 1 mod 3 (cube roots of unity), not {ring}")
        try:
            roots = base.cube_roots_of_unity()
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return PolySpec(tuple(_scalar(ring, r) for r in roots))
    if s.startswith("[") and s.endswith("]"):
        parts = s[1:-1].split(";")
        if len(parts) != 3:
            raise ParseError(f"explicit cubic needs three roots: {text!r}")
        try:
            return PolySpec(tuple(_scalar(ring, base.decode(_number(p))) for p in parts))
        except ValueError as exc:
            raise ParseError(f"bad root in {text!r}: {exc}") from exc
    raise ParseError(f"unrecognised polynomial {text!r}")


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def load_matrix(path: Path, ring: Ring | None) -> Matrix:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read matrix from {path}: {exc}") from exc
    try:
        if isinstance(obj, dict):
            if ring is None and "ring" in obj:
                ring = ring_from_json(obj["ring"])
            obj = obj.get("entries", obj.get("matrix"))
        if ring is None:
            raise ParseError("no ring given (use --ring or a 'ring' field in the input)")
        return Matrix.from_json(ring, obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"input is not a matrix over {ring}: {exc}") from exc


def _load_witness(cfg: JobConfig, ring: Ring) -> CommutatorWitness:
    try:
        obj = json.loads(Path(cfg.witness).read_text())
        return CommutatorWitness.from_json(obj, ring)
    except (OSError, json.JSONDecodeError, CertificateError) as exc:
        raise ParseError(f"cannot read witness: {exc}") from exc


def _witness_for(cfg: JobConfig, ring: Ring, target, k: int) -> CommutatorWitness:
    if cfg.witness is not None:
        return _load_witness(cfg, ring)
    return split_k_commutators(target, k, ring, seed=cfg.seed)


def _load_targets(cfg: JobConfig, ring: Ring):
    if cfg.targets is None:
        z = ring.zero()
        return [(z, z, z)] * 3
    try:
        obj = json.loads(Path(cfg.targets).read_text())
        rows = [tuple(ring.decode(v) for v in row) for row in obj]
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ParseError(f"cannot read targets: {exc}") from exc
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ParseError("targets must be three rows of three ring elements")
    return rows


def _sum(ring, items):
    total = ring.zero()
    for v in items:
        total = total + v
    return total


def decompose(cfg: JobConfig):
    A = load_matrix(cfg.input, cfg.ring)
    ring = A.ring
    polys = [parse_poly(p, ring) for p in cfg.polys]
    want = POLY_COUNT.get(cfg.command)
    if want is not None and len(polys) != want:
        raise ParseError(f"{cfg.command} needs {want} polynomials, got {len(polys)}")
    cmd = cfg.command
    if cmd == "decompose3":
        targets = _load_targets(cfg, ring)
        w = _witness_for(cfg, ring, A.trace() - _sum(ring, (v for row in targets for v in row)), 1)
        return corollary_decompose(A, targets, w)
    if cmd == "polysum3":
        roots = _sum(ring, (r for p in polys for r in p.roots))
        return poly_sum_3(A, polys, _witness_for(cfg, ring, A.trace() - roots, 1))
    if cmd == "polysum4":
        return poly_sum_4(A, polys, seed=cfg.seed)
    if cmd in ("subrings", "truss"):
        if ring != weyl_oracle().ring:
            raise InfeasibleError(f"{cmd} needs a ring with a surjective inner derivation (Weyl), not {ring}")
        fn = three_nilpotent_subrings if cmd == "subrings" else truss_decompose
        return fn(A, weyl_oracle())
    if cmd in ("nilpotentsum", "squarezerosum"):
        w = _witness_for(cfg, ring, A.trace(), cfg.k)
        fn = nilpotent_sum if cmd == "nilpotentsum" else squarezero_sum
        return fn(A, w)
    raise ParseError(f"unknown command {cmd!r}")


def run(cfg: JobConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.command == "selftest":
        from .selftest import run_selftest
        results = run_selftest(seed=cfg.seed, quick=cfg.quick, out=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    if cfg.command == "verify":
        return _run_verify(cfg, out)
    try:
        d = decompose(cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_PARSE
    except (InfeasibleError, WitnessMismatchError, ShapeError) as exc:
        print(f"infeasible: {exc}", file=out)
        return EXIT_INFEASIBLE
    d.seed = cfg.seed if d.seed is None else d.seed
    target = cfg.output or Path(str(cfg.input) + ".cert.json")
    Path(target).write_text(d.dumps())
    # re-read from disk so the serialized form is what gets verified
    report = verify_certificate(loads(Path(target).read_text()))
    claims = ",".join(sorted({type(c).__name__ for c in d.claims}))
    print(f"{cfg.command}: {len(d.terms)} terms [{claims}] -> {target}; verify: {report.summary()}", file=out)
    return EXIT_OK if report.overall else EXIT_VERIFY


def _run_verify(cfg: JobConfig, out) -> int:
    try:
        text = Path(cfg.input).read_text()
        d = loads(text)
    except (OSError, CertificateError) as exc:
        print(f"error: {exc}", file=out)
        return EXIT_PARSE
    report = verify_certificate(d)
    if cfg.output:
        Path(cfg.output).write_text(report_json(report))
    print(f"verify {cfg.input}: {report.summary()}", file=out)
    for msg in report.messages:
        print(f"  {msg}", file=out)
    return EXIT_OK if report.overall else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=None, help="PRNG seed (default: $NILSUM_SEED or 0)")
        if name == "selftest":
            p.add_argument("--quick", action="store_true", help="reduced sample counts")
            continue
        p.add_argument("input", type=Path)
        p.add_argument("-o", "--output", type=Path, default=None)
        if name == "verify":
            continue
        p.add_argument("--ring", default=None, help="Q, F7, M(2,Q), M(2,F5), Weyl")
        p.add_argument("--witness", type=Path, default=None, help="commutator witness JSON")
        if name in POLY_COUNT:
            p.add_argument("--polys", required=True, help="comma list of X3, X3-1 or [a;b;c]")
        if name in ("nilpotentsum", "squarezerosum"):
            p.add_argument("--k", type=int, default=1, help="number of commutators in the trace witness")
        if name == "decompose3":
            p.add_argument("--targets", type=Path, default=None, help="3x3 JSON of diagonal targets")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    ring = parse_ring(args.ring) if getattr(args, "ring", None) else None
    polys = args.polys.split(",") if getattr(args, "polys", None) else []
    return JobConfig(
        command=args.command,
        input=getattr(args, "input", None),
        ring=ring,
        output=getattr(args, "output", None),
        seed=default_seed() if args.seed is None else args.seed,
        polys=polys,
        k=getattr(args, "k", 1),
        witness=getattr(args, "witness", None),
        targets=getattr(args, "targets", None),
        quick=getattr(args, "quick", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if cfg.command in ("nilpotentsum", "squarezerosum") and cfg.k < 1:
        print("error: --k must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
