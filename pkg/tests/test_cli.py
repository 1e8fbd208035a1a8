import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from ihara.cli import decode, encode, main, parse_complex, parse_records
from ihara.series import Series

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def records(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, parse_records(out)


def test_encode_round_trip():
    vals = [Fraction(-7, 3), 1.5, 2 - 0.25j, [1, Fraction(1, 2)], {"a": 3j}, float("inf"), True, None]
    for v in vals:
        assert decode(encode(v)) == v


def test_parse_complex():
    assert parse_complex("0.3+0.2i") == 0.3 + 0.2j
    assert parse_complex("-1.5") == -1.5


def test_cycles_k4(capsys):
    code, recs = records(capsys, "cycles", GRAPHS / "k4.graph", "--max-len", 3)
    assert code == 0
    assert recs[0]["record"] == "header" and recs[0]["max_len"] == 3
    cls = [r for r in recs if r["record"] == "class"]
    assert len(cls) == 8 and all(r["prime"] and r["length"] == 3 for r in cls)
    assert recs[-1]["counts"] == {"3": 8}


def test_cycles_z_empty(capsys):
    code, out, _ = run(capsys, "cycles", GRAPHS / "z1.graph")
    assert code == 0 and "(no reduced cycles)" in out


def test_cycles_c6_z3(capsys):
    code, recs = records(capsys, "cycles", "C6/Z3", "--max-len", 6)
    cls = [r for r in recs if r["record"] == "class"]
    assert len(cls) == 2 and all(r["nu"] == 2 and r["stabilizer"] == 3 for r in cls)


def test_zeta_series_k4(capsys):
    M = 11
    code, recs = records(capsys, "zeta", "K4", "--series", M)
    assert code == 0
    inv = Series([r["inverse_Z"] for r in recs if r["record"] == "coefficient"])
    poly = lambda cs: Series.from_polynomial(cs, M)
    assert inv == poly([1, 0, -1]) ** 2 * poly([1, -1]) * poly([1, -2]) * poly([1, 1, 2]) ** 3
    assert all(isinstance(r["Z"], Fraction) or isinstance(r["Z"], int) for r in recs if r["record"] == "coefficient")


def test_zeta_all_methods_z2(capsys):
    code, recs = records(capsys, "zeta", GRAPHS / "z2.graph", "--at", "0.1", "--method", "all")
    vals = [r for r in recs if r["record"] == "value"]
    assert code == 0 and [r["method"] for r in vals] == ["det", "series", "euler"]
    assert max(r["delta"] for r in vals) < 1e-9


def test_zeta_domain_error(capsys):
    code, out, err = run(capsys, "zeta", GRAPHS / "k4.graph", "--at", "0.9")
    assert code == 2 and "1/alpha" in err


def test_zeta_requires_request(capsys):
    code, _, err = run(capsys, "zeta", "K4")
    assert code == 2 and "--series" in err


def test_det_formula_series(capsys):
    code, recs = records(capsys, "det-formula", "C6/Z3", "--series", 12)
    assert code == 0 and recs[-1] == {"record": "identity", "holds": True}


def test_det_formula_both(capsys):
    code, recs = records(capsys, "det-formula", "Z2", "--at", "0.1+0.05i", "--method", "both", "--quadrature", 64)
    vals = [r for r in recs if r["record"] == "value"]
    assert code == 0 and len(vals) == 2 and vals[1]["delta"] < 1e-9


def test_functional_eq(capsys):
    code, recs = records(capsys, "functional-eq", "Z2", "--points", 5, "--seed", 3)
    assert code == 0
    assert recs[0]["lambda_sign"] == -1 and recs[0]["seed"] == 3
    assert sum(r["record"] == "point" for r in recs) == 5 and recs[-1]["passed"]


def test_functional_eq_failure_exit(capsys):
    code, _, _ = run(capsys, "functional-eq", "K4", "--points", 3, "--tol", 1e-30)
    assert code == 1


def test_functional_eq_irregular(capsys):
    code, _, err = run(capsys, "functional-eq", "comb")
    assert code == 2 and "regular" in err


def test_verify_k4(capsys):
    code, recs = records(capsys, "verify", GRAPHS / "k4.graph", "--order", 10, "--quadrature", 32)
    assert code == 0
    assert recs[0]["order"] == 10 and recs[0]["quadrature"] == 32
    checks = [r for r in recs if r["record"] == "check"]
    assert checks and all(r["passed"] for r in checks)


def test_verify_z2(capsys):
    code, recs = records(capsys, "verify", "--graph", GRAPHS / "z2.graph", "--order", 8, "--quadrature", 64,
                         "--points", 4)
    names = {r["name"]: r["passed"] for r in recs if r["record"] == "check"}
    assert code == 0
    assert any("formula" in n for n in names) and any("functional" in n for n in names)


def test_verify_requires_order(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "K4", "--quadrature", "16"])
    assert exc.value.code == 2


def test_corrupted_file(tmp_path, capsys):
    text = (GRAPHS / "z2.graph").read_text().splitlines()
    bad = [ln for ln in text]
    i = next(k for k, ln in enumerate(bad) if ln.strip().startswith("edges"))
    bad.insert(i + 1, "  0 0 0 0")
    path = tmp_path / "bad.graph"
    path.write_text("\n".join(bad) + "\n")
    code, _, err = run(capsys, "verify", path, "--order", 6, "--quadrature", 16)
    assert code != 0 and f"line {i + 2}" in err


def test_unknown_graph(capsys):
    code, _, err = run(capsys, "cycles", "no-such-graph")
    assert code == 2 and "neither a file" in err


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "ihara.cli", "cycles", "K4", "--max-len", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "{3: 8}" in res.stdout
