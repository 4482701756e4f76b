"""Acceptance criteria, one test each, at their stated tolerances and time budgets.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``;
either way each criterion prints one PASS/FAIL line.
"""

import contextlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from berezin_kit.algebra import DEFAULT_GRID, Params, bracket, builtin  # noqa: E402
from berezin_kit.berezin import (  # noqa: E402
    check_berezin_table,
    check_defining_pdes,
    check_leibniz_routes,
    check_schrodinger_lemma,
    lemma_raw_discrepancy,
    transform_names,
)
from berezin_kit.cli import main  # noqa: E402
from berezin_kit.mutations import failing_items, mutations  # noqa: E402
from berezin_kit.theorems import (  # noqa: E402
    check_decoupling,
    check_gram_positivity,
    gaussian_check,
    hankel_positivity,
)
from berezin_kit.weyl import check_homomorphism, hat_rep  # noqa: E402
from test_algebra import TABLE  # noqa: E402

ALGEBRAS = ("hw", "sl2", "schrodinger")
GRID = list(DEFAULT_GRID)


def _cli_json(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([*argv, "--format", "json"])
    return code, json.loads(buf.getvalue())


def criterion_1():
    results = [_cli_json("verify", "--algebra", a, "--suite", "jacobi") for a in ALGEBRAS]
    jacobi_ok = all(code == 0 and doc["pass"] for code, doc in results)
    s = builtin("schrodinger")
    wrong = [(r, c) for r, c, want in TABLE if bracket(r, c, s) != want]
    return jacobi_ok and len(TABLE) == 36 and not wrong, f"jacobi exit codes {[c for c, _ in results]}, table entries wrong: {wrong}"


def criterion_2():
    reports = [check_homomorphism(hat_rep("schrodinger", p)) for p in GRID]
    pairs = sum(len(r.checks) for r in reports)
    failed = [c.description for r in reports for c in r.failures]
    return not failed and pairs == 45, f"{pairs} pair checks over 3 points, failures: {failed}"


def criterion_3():
    reports = [check_leibniz_routes(a, p, 8) for a in ALGEBRAS for p in GRID]
    bad = [r.subject + str(r.params) for r in reports if not r.passed]
    return not bad, f"{len(reports)} route comparisons to degree 8, failing: {bad}"


def criterion_4():
    reports = [r for a in ALGEBRAS for p in GRID for r in check_defining_pdes(a, p, 8)]
    names = {r.subject for r in reports}
    expected = {"pde:schrodinger:dw1", "pde:schrodinger:dw2", "pde:hw:dw", "pde:sl2:dw"}
    bad = [r.subject for r in reports if not r.passed]
    degree_ok = all(r.cap == 7 for r in reports)
    return names == expected and degree_ok and not bad, f"{len(reports)} PDE checks to degree 7, failing: {bad}"


def criterion_5():
    required = {"schrodinger": {"M", "K", "G", "D", "P_x", "P_t", "X1", "X2"}, "hw": {"X", "P", "H"}, "sl2": {"R", "L", "rho"}}
    covered = all(required[a] <= set(transform_names(a)) for a in ALGEBRAS)
    reports = [r for a in ALGEBRAS for p in GRID for r in check_berezin_table(a, p, 6)]
    bad = [r.subject for r in reports if not r.passed]
    return covered and not bad, f"{len(reports)} transform reports to degree 6, failing: {bad}"


def criterion_6():
    report = check_decoupling(GRID, 6)
    zero_checks = [c for c in report.checks if "vanishes identically" in c.description]
    return report.passed and len(zero_checks) == 3, f"{len(report.checks)} checks, failing: {[c.description for c in report.failures]}"


def criterion_7():
    report = gaussian_check(10, [Fraction(1), Fraction(2), Fraction(3, 2)], "hw")
    return report.passed, f"{len(report.checks)} moment checks, failing: {[c.description for c in report.failures]}"


def criterion_8():
    reports = [
        hankel_positivity("X1", 3, "hw", Params(1, 1)),
        hankel_positivity("X2", 3, "sl2", Params(1, 1)),
        hankel_positivity("X2", 3, "schrodinger", Params(1, 1)),
        check_gram_positivity("schrodinger", Params(1, 1), 4),
    ]
    bad = [r.theorem for r in reports if not r.passed]
    return not bad, f"hankel (order 3) and degree-4 Gram, failing: {bad}"


def criterion_9():
    consistent = [check_schrodinger_lemma(p, 6) for p in GRID]
    raw = lemma_raw_discrepancy(Params(1, 1), 6)
    doc = raw.to_json()
    localized = doc["flag"] == "known-discrepancy" and doc["first_mismatch"] is not None
    ok = all(r.passed for r in consistent) and raw.passed and raw.observed_mismatch and localized
    return ok, f"consistent reading passes at 3 points; raw reading first mismatch {doc['first_mismatch']}"


def criterion_10():
    outcomes = []
    for mut in mutations():
        bad = failing_items(mut.run())
        control = failing_items(mut.control())
        outcomes.append((mut.name, bool(bad) and any(mut.locus in b for b in bad) and not control))
    kinds = {"corrupted-bracket", "dropped-hat-term", "wrong-adjoint", "missing-half-shift", "wrong-pde-coefficient"}
    names = {n for n, _ in outcomes}
    return kinds <= names and all(ok for _, ok in outcomes), f"{len(outcomes)} mutations: {outcomes}"


CRITERIA = [
    (1, "Jacobi + table fidelity", criterion_1, 1),
    (2, "hat-homomorphism", criterion_2, 1),
    (3, "Leibniz-function route independence", criterion_3, 30),
    (4, "defining PDEs", criterion_4, 5),
    (5, "Berezin table", criterion_5, 60),
    (6, "decoupling theorems", criterion_6, 5),
    (7, "Gaussian law", criterion_7, 5),
    (8, "Hankel and Gram positivity", criterion_8, 10),
    (9, "Lemma discrepancy handling", criterion_9, 10),
    (10, "mutation sensitivity", criterion_10, 30),
]


def evaluate(fn, budget):
    start = time.perf_counter()
    passed, detail = fn()
    elapsed = time.perf_counter() - start
    return passed and elapsed < budget, elapsed, detail


def _line(number, title, ok, elapsed, budget, detail):
    return f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s / {budget}s)  {detail}"


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"c{n:02d}" for n, *_ in CRITERIA])
def test_criterion(number, title, fn, budget, capsys):
    ok, elapsed, detail = evaluate(fn, budget)
    with capsys.disabled():
        print("\n" + _line(number, title, ok, elapsed, budget, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, fn, budget in CRITERIA:
        ok, elapsed, detail = evaluate(fn, budget)
        results.append(ok)
        print(_line(number, title, ok, elapsed, budget, detail))
    sys.exit(0 if all(results) else 1)
