import json
import subprocess
import sys

import jsonschema
import pytest

from berezin_kit.algebra import LieAlgebraSpec
from berezin_kit.cli import SUITES, VERSION, main, report_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, report_schema())
    return code, doc


def test_full_suite_default_point(capsys):
    code, doc = run_json(capsys, "verify", "--suite", "all")
    assert code == 0
    assert doc["version"] == VERSION
    assert doc["pass"] and all(r["pass"] for r in doc["reports"])
    assert doc["config"]["suites"] == list(SUITES)


@pytest.mark.parametrize("alg", ["hw", "sl2"])
def test_full_suite_other_algebras(capsys, alg):
    code, doc = run_json(capsys, "verify", "--algebra", alg, "--params-grid")
    assert code == 0
    assert "decoupling" not in doc["config"]["suites"]
    assert len(doc["config"]["points"]) == 3


def test_json_is_deterministic(capsys):
    argv = ("verify", "--suite", "homomorphism,jacobi", "--seed", "7", "-m", "3/2", "-c", "5/7", "--format", "json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    # suite order is fixed, not the order requested
    doc = json.loads(first)
    assert doc["config"]["suites"] == ["jacobi", "homomorphism"]


def test_seed_changes_random_words(capsys):
    _, a = run_json(capsys, "verify", "--suite", "homomorphism", "--seed", "1")
    _, b = run_json(capsys, "verify", "--suite", "homomorphism", "--seed", "2")
    pick = lambda d: [r for r in d["reports"] if r["subject"].startswith("pbw-hat")][0]["checks"]
    assert pick(a) != pick(b)


def test_m_zero_with_decoupling(capsys):
    code, doc = run_json(capsys, "verify", "-m", "0", "--suite", "decoupling")
    assert code != 0
    assert doc["error"]["kind"] == "m-zero"
    assert "m must be nonzero" in doc["error"]["message"]


def test_m_zero_without_decoupling_is_fine(capsys):
    code, _ = run_json(capsys, "verify", "-m", "0", "--suite", "jacobi,homomorphism")
    assert code == 0


@pytest.mark.parametrize(
    "argv,kind",
    [
        (("verify", "-m", "0.5"), "invalid-rational"),
        (("verify", "-c", "1e2"), "invalid-rational"),
        (("verify", "--algebra", "e8"), "unknown-algebra"),
        (("verify", "--cap", "1", "--suite", "pdes"), "cap-too-small"),
        (("verify", "--suite", "nonsense"), "unknown-suite"),
        (("verify", "--algebra", "hw", "--suite", "decoupling"), "inapplicable-suite"),
        (("decouple", "--algebra", "sl2"), "inapplicable-command"),
        (("berezin", "--op", "Q"), "unknown-operator"),
        (("moments", "--observable", "Q"), "unknown-observable"),
    ],
)
def test_errors_are_machine_readable(capsys, argv, kind):
    code, doc = run_json(capsys, *argv)
    assert code == 2
    assert doc["error"]["kind"] == kind


def test_text_errors_go_to_stderr(capsys):
    code, out, err = run(capsys, "verify", "--algebra", "e8")
    assert code == 2 and out == ""
    assert "unknown-algebra" in err


def test_gaussian_moment_table(capsys):
    code, out, _ = run(capsys, "verify", "--algebra", "hw", "-m", "2", "--suite", "gaussian", "--order", "10")
    assert code == 0
    for k, value in ((2, 2), (4, 12), (6, 120), (8, 1680), (10, 30240)):
        assert f"(X+P)^{k}|Omega> = {value}" in out


def test_user_algebra_gets_jacobi_only(capsys, tmp_path):
    so3 = LieAlgebraSpec.from_brackets("so3", ("a", "b", "c"), {("a", "b"): "c", ("b", "c"): "a", ("c", "a"): "b"})
    path = tmp_path / "so3.json"
    path.write_text(json.dumps(so3.to_json()))
    code, doc = run_json(capsys, "verify", "--algebra-file", str(path))
    assert code == 0
    assert doc["config"]["suites"] == ["jacobi"]
    code, doc = run_json(capsys, "verify", "--algebra-file", str(path), "--suite", "pdes")
    assert code == 2 and doc["error"]["kind"] == "inapplicable-suite"


def test_failing_user_algebra_exits_1(capsys, tmp_path):
    # [a, b] = a, [b, c] = b, [c, a] = c violates Jacobi
    bad = LieAlgebraSpec.from_brackets("bad", ("a", "b", "c"), {("a", "b"): "a", ("b", "c"): "b", ("c", "a"): "c"})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad.to_json()))
    code, doc = run_json(capsys, "verify", "--algebra-file", str(path))
    assert code == 1 and not doc["pass"]


def test_subcommands(capsys):
    code, doc = run_json(capsys, "leibniz", "--algebra", "sl2", "-c", "1/2", "--cap", "3")
    assert code == 0 and "Upsilon (m=1, c=1/2)" in doc["results"]
    code, doc = run_json(capsys, "berezin", "--algebra", "hw", "--op", "X1", "--cap", "4")
    assert code == 0 and doc["reports"][0]["subject"] == "berezin:hw:X1"
    code, doc = run_json(capsys, "moments", "--algebra", "sl2", "--order", "6")
    assert code == 0 and doc["results"]["X2 (m=1, c=1)"] == ["1", "1", "2", "6", "24", "120", "720"]
    code, doc = run_json(capsys, "decouple", "-m", "3/2", "-c", "5/7")
    assert code == 0 and doc["results"]["(m=3/2, c=5/7)"]["R0"][0]["coeff"] == "-1/3"


def test_report_schema_is_valid(capsys):
    code, out, _ = run(capsys, "report-schema")
    assert code == 0
    jsonschema.Draft202012Validator.check_schema(json.loads(out))


def test_known_discrepancies_are_flagged(capsys):
    _, doc = run_json(capsys, "verify", "--suite", "berezin,leibniz", "-m", "3/2", "-c", "5/7")
    flagged = [r for r in doc["reports"] if r["kind"] == "known-discrepancy"]
    assert {r["subject"] for r in flagged} == {"berezin:schrodinger:X1-printed", "leibniz-formula:schrodinger:lemma-printed"}
    assert all(r["first_mismatch"] and r["pass"] for r in flagged)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "berezin_kit", "verify", "--suite", "jacobi"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS  jacobi:schrodinger" in proc.stdout
