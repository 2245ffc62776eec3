from __future__ import annotations

import json

import pytest

from nilgen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def report(out: str) -> dict:
    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == 1
    return json.loads(lines[0])


def test_exponents(capsys):
    code, out, _ = run(capsys, "exponents", "F4")
    rep = report(out)
    assert code == 0 and rep["passed"]
    assert rep["outputs"] == {"exponents": [1, 5, 7, 11], "phi_exponents": [4, 8]}
    assert {"command", "inputs", "outputs", "provenance", "checks"} <= set(rep)


def test_classify_exceptional(capsys):
    code, out, _ = run(capsys, "classify", "E7", "--theta-class", "E6")
    rep = report(out)
    assert code == 0
    assert rep["outputs"]["orbit"] == "E6"
    assert rep["outputs"]["family"] == "Second"
    assert rep["outputs"]["m_theta"] == 9
    assert rep["inputs"]["theta"] == [2, 5, 7]


def test_classify_very_even(capsys):
    code, out, _ = run(capsys, "classify", "D6", "--theta", "1,3,6")
    rep = report(out)
    assert code == 0
    assert rep["outputs"]["very_even_tag"] == 2
    assert rep["outputs"]["partition"] == [6, 6]


def test_generators(capsys):
    code, out, _ = run(capsys, "generators", "E8", "--theta", "1,4,6,8")
    rep = report(out)
    assert code == 0
    assert rep["outputs"]["v_degrees"] == [17, 19]
    assert rep["outputs"]["invariants"] == ["d1", "d2", "d3", "d4"]
    assert rep["outputs"]["v_modules"] == ["V_phi", "V_phi"]


def test_rewrite(capsys):
    code, out, _ = run(capsys, "rewrite", "A5", "--omega", "3,5", "--lambda", "a1", "--initial-shift", "1")
    rep = report(out)
    assert code == 0
    assert rep["outputs"]["status"] == "Normalized"
    assert rep["outputs"]["final"]["shift"] == 3
    assert rep["outputs"]["final"]["omega"] == [2, 4]
    assert rep["outputs"]["trace"]


def test_covariants(capsys):
    code, out, _ = run(capsys, "covariants", "B4")
    rep = report(out)
    assert code == 0
    missing = [row["omega"] for row in rep["outputs"] if not row["exists"]]
    assert missing == [[4]]


def test_verify_classical(capsys):
    code, out, _ = run(capsys, "verify", "D6", "--theta", "1,3,5", "--points", "2", "--seed", "5")
    rep = report(out)
    assert code == 0 and rep["passed"]
    assert rep["outputs"]["very_even_sign"] == 1
    assert rep["inputs"]["seed"] == 5


def test_verify_exceptional(capsys):
    code, out, _ = run(capsys, "verify", "E6", "--theta", "1,4,6")
    rep = report(out)
    assert code == 0
    assert rep["outputs"]["flagged"] == [7, 8, 11]


def test_pfaffian(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([["0", "1/2", "0", "0"], ["-1/2", "0", "0", "0"], ["0", "0", "0", "3"], ["0", "0", "-3", "0"]]))
    code, out, _ = run(capsys, "pfaffian", "--input", str(path), "--size", "4")
    rep = report(out)
    assert code == 0
    assert rep["outputs"] == {"pfaffian": "3/2", "determinant": "9/4"}


def test_table_output(capsys):
    code, out, _ = run(capsys, "exponents", "G2", "--table")
    assert code == 0
    assert out.startswith("== exponents")
    assert "[PASS]" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("classify", "D5", "--theta", "1,2"),
        ("generators", "X3", "--theta", "1"),
        ("rewrite", "A3", "--lambda", "a9"),
        ("classify", "E7", "--theta-class", "nonsense"),
    ],
)
def test_bad_input_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.startswith("nilgen")


def test_pfaffian_size_mismatch(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([["0", "1"], ["-1", "0"]]))
    code, _, err = run(capsys, "pfaffian", "--input", str(path), "--size", "4")
    assert code == 2 and "expected size 4" in err


def test_parse_error_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 2
