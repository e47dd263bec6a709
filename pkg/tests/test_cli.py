import io
import json
import random

import pytest

from conftest import trace_zero
from nilsum.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, JobConfig, main, parse_poly, run
from nilsum.core import QQ, WEYL, Matrix, MatrixRing, PrimeField
from nilsum.errors import NilsumError


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return path


@pytest.fixture
def a8(tmp_path):
    A = trace_zero(QQ, 8, random.Random(5))
    return _write(tmp_path / "A.json", A.to_json())


def test_nilpotentsum_eight(a8, tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["nilpotentsum", "--ring", "Q", "--k", "1", str(a8), "-o", str(out)]) == EXIT_OK
    cert = json.loads(out.read_text())
    assert len(cert["terms"]) == 6
    assert "6 terms" in capsys.readouterr().out


def test_tampered_certificate_fails(a8, tmp_path):
    out = tmp_path / "cert.json"
    main(["nilpotentsum", "--ring", "Q", str(a8), "-o", str(out)])
    cert = json.loads(out.read_text())
    cert["terms"][1][0][0] = {"num": "17", "den": "3"}
    _write(out, cert)
    assert main(["verify", str(out)]) == EXIT_VERIFY


def test_polysum4_trace_gate(tmp_path, capsys):
    R = MatrixRing(2, QQ)
    A = Matrix.identity(R, 3)
    path = _write(tmp_path / "A.json", A.to_json())
    assert main(["polysum4", "--ring", "M(2,Q)", "--polys", "X3,X3,X3,X3", str(path)]) == EXIT_INFEASIBLE
    assert "trace obstruction" in capsys.readouterr().out


def test_parse_failures(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[[1, 2], [3]]")
    assert main(["squarezerosum", "--ring", "Q", str(bad)]) == EXIT_PARSE
    bad.write_text("{")
    assert main(["verify", str(bad)]) == EXIT_PARSE
    assert main(["nilpotentsum", str(tmp_path / "missing.json")]) == EXIT_PARSE


def test_subrings_need_weyl(tmp_path):
    path = _write(tmp_path / "A.json", Matrix.identity(QQ, 3).to_json())
    assert main(["subrings", "--ring", "Q", str(path)]) == EXIT_INFEASIBLE


@pytest.mark.parametrize("cmd", ["subrings", "truss", "decompose3", "nilpotentsum", "squarezerosum"])
def test_weyl_commands(cmd, tmp_path):
    A = Matrix.random(WEYL, 3, random.Random(2), max_degree=3, max_terms=3)
    path = _write(tmp_path / "A.json", {"ring": "Weyl", "entries": A.to_json()})
    assert main([cmd, str(path), "--k", "2"] if cmd.endswith("sum") else [cmd, str(path)]) == EXIT_OK


def test_polysum3_order_three(tmp_path):
    A = trace_zero(PrimeField(7), 3, random.Random(3))
    path = _write(tmp_path / "A.json", A.to_json())
    assert main(["polysum3", "--ring", "F7", "--polys", "X3-1,X3-1,X3-1", str(path)]) == EXIT_OK
    assert main(["polysum3", "--ring", "F5", "--polys", "X3-1,X3,X3", str(path)]) == EXIT_PARSE


def test_explicit_witness_file(tmp_path):
    A = trace_zero(QQ, 4, random.Random(4))
    path = _write(tmp_path / "A.json", A.to_json())
    w = _write(tmp_path / "w.json", {"ring": "Q", "pairs": [[1, 2], [3, 4]], "target": 0})
    assert main(["squarezerosum", "--ring", "Q", "--witness", str(w), str(path)]) == EXIT_OK


def test_seed_pinned_runs_are_identical(tmp_path):
    # k = 2 over the Weyl algebra draws a random first commutator from the seed
    A = Matrix.random(WEYL, 5, random.Random(6), max_degree=2, max_terms=2)
    path = _write(tmp_path / "A.json", {"ring": "Weyl", "entries": A.to_json()})
    outs = []
    for name in ("one.json", "two.json"):
        out = tmp_path / name
        assert main(["nilpotentsum", "--k", "2", "--seed", "9", str(path), "-o", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_env_seed(monkeypatch, tmp_path):
    monkeypatch.setenv("NILSUM_SEED", "41")
    A = Matrix.random(WEYL, 3, random.Random(0), max_degree=2, max_terms=2)
    path = _write(tmp_path / "A.json", {"ring": "Weyl", "entries": A.to_json()})
    out = tmp_path / "c.json"
    assert main(["nilpotentsum", "--k", "2", str(path), "-o", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["seed"] == 41


def test_parse_poly_forms():
    F13 = PrimeField(13)
    assert [int(r) for r in parse_poly("X3-1", F13).roots] == [1, 3, 9]
    assert parse_poly("[1;1/2;-3]", QQ).roots == (1, QQ.decode("1/2"), -3)
    with pytest.raises(NilsumError):
        parse_poly("X^2", QQ)


def test_selftest_quick():
    buf = io.StringIO()
    run(JobConfig("selftest", quick=True), out=buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 9
    assert all(line.startswith(("PASS", "FAIL")) for line in lines)
