from fractions import Fraction

import pytest
from hypothesis import given

from berezin_kit.algebra import DEFAULT_GRID, EnvElement, Params, bracket, builtin
from berezin_kit.berezin import (
    berezin_from_fock,
    check_berezin_table,
    check_defining_pdes,
    check_leibniz_formula,
    check_leibniz_routes,
    check_log_derivatives,
    check_schrodinger_lemma,
    defining_pdes,
    lemma_raw_discrepancy,
    leibniz_from_fock,
    observable,
    printed_x1_discrepancy,
    sl2_matrices,
    transform_names,
)
from berezin_kit.series import MultiSeries, closed_form_berezin

from conftest import ALGEBRAS, rationals

CAP = 6


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_leibniz_function_routes_agree(name, params):
    report = check_leibniz_routes(name, params, CAP)
    assert report.passed, report.mismatches[:3]


def test_leibniz_function_low_order_coefficients():
    ups = leibniz_from_fock("schrodinger", Params("3/2", "5/7"), 4)
    assert ups.constant_term == 1
    assert ups.coefficient(w1=1, v1=1) == Fraction(5, 7)
    assert ups.coefficient(w2=1, v2=1) == Fraction(3, 2)
    # only total weights 2*w1 + w2 == 2*v1 + v2 occur
    assert all(2 * k[0] + k[1] == 2 * k[2] + k[3] for k in ups.coeffs)


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_berezin_table(name, params):
    reports = check_berezin_table(name, params, CAP)
    assert all(r.passed for r in reports), [r.subject for r in reports if not r.passed]
    covered = {r.subject.rsplit(":", 1)[1] for r in reports}
    assert set(transform_names(name)) <= covered


def test_table_covers_the_required_operators():
    assert set(transform_names("schrodinger")) == {"M", "K", "G", "D", "P_x", "P_t", "X1", "X2"}
    assert set(transform_names("hw")) == {"X", "P", "H", "X1"}
    assert set(transform_names("sl2")) == {"R", "L", "rho", "X2"}


def test_printed_x1_is_flagged_and_localized():
    p = Params("3/2", "5/7")
    report = printed_x1_discrepancy(p, CAP)
    assert report.passed and report.observed_mismatch
    at, printed, consistent = report.first_mismatch
    assert at == "v2^2"
    assert (printed, consistent) == (p.m, p.m / 2)
    doc = report.to_json()
    assert doc["flag"] == "known-discrepancy"
    assert doc["first_mismatch"] == {"at": "v2^2", "printed": "3/2", "consistent": "3/4"}


def test_x1_is_sum_of_its_parts():
    p = Params("3/2", "5/7")
    parts = sum((berezin_from_fock(g, "schrodinger", p, CAP) for g in ("P_t", "D", "K")), MultiSeries(("w1", "w2", "v1", "v2"), CAP))
    assert berezin_from_fock("X1", "schrodinger", p, CAP) == parts


@given(a=rationals, b=rationals, c=rationals)
def test_berezin_transform_is_linear(a, b, c):
    p = Params(2, "1/2")
    x = EnvElement.gen("K") * a + EnvElement.gen("G") * b + c
    lhs = berezin_from_fock(x, "schrodinger", p, 4)
    rhs = berezin_from_fock("K", "schrodinger", p, 4).scale(a) + berezin_from_fock("G", "schrodinger", p, 4).scale(b) + c
    assert lhs == rhs


def test_central_element_transforms_to_constant():
    p = Params("3/2", "5/7")
    assert berezin_from_fock("M", "schrodinger", p, CAP) == MultiSeries.constant(("w1", "w2", "v1", "v2"), CAP, p.m)


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_log_derivatives(name, params):
    assert all(r.passed for r in check_log_derivatives(name, params, CAP))


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_defining_pdes(name, params):
    reports = check_defining_pdes(name, params, 8)
    assert len(reports) == len(defining_pdes(name, params))
    assert all(r.passed for r in reports)
    assert all(r.cap == 7 for r in reports)


def test_wrong_pde_coefficient_fails_at_v1():
    p = Params(1, 1)
    pde = defining_pdes("schrodinger", p)[0]
    terms = tuple((k + 1, mono, d) if mono == (("v1", 1),) and d is None else (k, mono, d) for k, mono, d in pde.terms)
    bad = check_defining_pdes("schrodinger", p, 6, [type(pde)(pde.name, pde.wrt, terms)])[0]
    assert not bad.passed
    assert bad.mismatches[0][0] == "v1"


@pytest.mark.parametrize("name", ALGEBRAS)
@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_leibniz_formulas(name, params):
    reports = check_leibniz_formula(name, CAP, params)
    assert reports and all(r.passed for r in reports), [r.subject for r in reports if not r.passed]


def test_lemma_consistent_reading_and_raw_discrepancy():
    p = Params(1, 1)
    assert check_schrodinger_lemma(p, CAP).passed
    raw = lemma_raw_discrepancy(p, CAP)
    assert raw.predicted_mismatch and raw.observed_mismatch and raw.passed
    assert raw.first_mismatch[0] == "|0,0> * w2*v2"


def test_raw_lemma_reading_agrees_when_m_is_2():
    raw = lemma_raw_discrepancy(Params(2, "1/2"), CAP)
    assert not raw.predicted_mismatch and not raw.observed_mismatch and raw.passed


def _commutator(a, b):
    ab = [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return [[ab[i][j] - ba[i][j] for j in range(2)] for i in range(2)]


def test_sl2_matrices_realize_the_brackets():
    mats = sl2_matrices()
    alg = builtin("sl2")
    for x in alg.basis:
        for y in alg.basis:
            expected = [[Fraction(0)] * 2 for _ in range(2)]
            for word, coeff in bracket(x, y, alg).terms.items():
                (g,) = word
                expected = [[expected[i][j] + coeff * mats[g][i][j] for j in range(2)] for i in range(2)]
            assert _commutator(mats[x], mats[y]) == expected, (x, y)


def test_observable_names():
    p = Params(1, 1)
    assert observable("X2", "schrodinger", p) == EnvElement.gen("G") + EnvElement.gen("P_x")
    with pytest.raises(ValueError):
        observable("X3", "hw", p)


def test_same_transform_from_closed_and_fock_route_for_decoupled():
    p = Params("3/2", "5/7")
    for name in ("L0", "R0", "rho0"):
        assert berezin_from_fock(observable(name, "schrodinger", p), "schrodinger", p, 5) == closed_form_berezin(name, "schrodinger", p, 5)
