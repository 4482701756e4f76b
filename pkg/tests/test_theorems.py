from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from berezin_kit.algebra import DEFAULT_GRID, Params
from berezin_kit.berezin import observable
from berezin_kit.fock import gram_matrix, leading_principal_minors, moments
from berezin_kit.theorems import (
    check_decoupling,
    check_gram_positivity,
    check_self_adjointness,
    gaussian_check,
    gaussian_moment,
    hankel_matrix,
    hankel_positivity,
)
from berezin_kit.weyl import WeylError

HALF = Fraction(1, 2)
positive = st.builds(Fraction, st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=4))


def _failed(report):
    return [c.description for c in report.failures]


def test_decoupling_on_grid():
    report = check_decoupling(list(DEFAULT_GRID), 6)
    assert report.passed, _failed(report)
    # the c = 1/2 point contributes the three vanishing checks
    assert sum("vanishes identically" in c.description for c in report.checks) == 3


@given(m=st.builds(Fraction, st.integers(min_value=-5, max_value=5).filter(bool), st.integers(min_value=1, max_value=4)),
       c=st.builds(Fraction, st.integers(min_value=-4, max_value=8), st.integers(min_value=1, max_value=4)))
def test_decoupling_is_a_polynomial_identity(m, c):
    assert check_decoupling(Params(m, c), 3).passed


def test_decoupling_without_shift_fails_where_expected():
    report = check_decoupling(Params(1, 1), 4, rho0_shift=Fraction(0))
    failed = _failed(report)
    assert "(m=1, c=1) [L0, R0] = rho0" in failed
    assert "(m=1, c=1) hat subtraction rho0 equals closed form" in failed
    # a constant shift is invisible to commutators
    assert "(m=1, c=1) [rho0, R0] = 2 R0" not in failed


def test_decoupling_rejects_m_zero():
    with pytest.raises(WeylError, match="m must be nonzero"):
        check_decoupling(Params(0, 1))


def test_self_adjointness():
    report = check_self_adjointness(6, list(DEFAULT_GRID))
    assert report.passed, _failed(report)


def test_wrong_adjoint_breaks_symmetry():
    report = check_self_adjointness(4, Params(1, 1), {"K": "P_x", "G": "P_t"}, algebras=("schrodinger",))
    failed = _failed(report)
    assert "(m=1, c=1) schrodinger: Upsilon is w<->v symmetric" in failed


@pytest.mark.parametrize("n,m,value", [(2, 2, 2), (4, 2, 12), (6, 2, 120), (3, 5, 0), (4, Fraction(3, 2), Fraction(27, 4))])
def test_gaussian_moment_values(n, m, value):
    assert gaussian_moment(n, Fraction(m)) == value


@pytest.mark.parametrize("alg", ["hw", "schrodinger"])
def test_gaussian_law(alg):
    report = gaussian_check(10, [1, 2, Fraction(3, 2)], alg)
    assert report.passed, _failed(report)


def test_gaussian_rejects_odd_order():
    with pytest.raises(ValueError):
        gaussian_check(5, 1)


@pytest.mark.parametrize(
    "x,alg,params,minors",
    [
        ("X1", "hw", Params(1, 1), [1, 1, 2, 12]),
        ("X2", "sl2", Params(1, 1), [1, 1, 4, 144]),
        ("X2", "schrodinger", Params(1, 1), [1, 1, 2, 12]),
    ],
)
def test_hankel_minors(x, alg, params, minors):
    report = hankel_positivity(x, 3, alg, params)
    assert report.passed
    assert [c.description.split(" = ")[1].split(" ")[0] for c in report.checks if "leading minor" in c.description] == [str(v) for v in minors]


def test_hankel_matrix_shape():
    assert hankel_matrix([1, 0, 1, 0, 3], 2) == [[1, 0, 1], [0, 1, 0], [1, 0, 3]]


@pytest.mark.parametrize("params", DEFAULT_GRID, ids=str)
def test_gram_positivity_on_grid(params):
    assert check_gram_positivity("schrodinger", params, 4).passed


@given(m=positive, c=st.builds(Fraction, st.integers(min_value=0, max_value=8), st.integers(min_value=1, max_value=4)).map(lambda q: q + HALF))
def test_gram_positive_above_threshold(m, c):
    assert c >= HALF
    assert check_gram_positivity("schrodinger", Params(m, c), 4).passed


@given(m=positive, c=st.builds(Fraction, st.integers(min_value=-6, max_value=5), st.integers(min_value=12, max_value=12)))
def test_gram_indefinite_below_threshold(m, c):
    assert c < HALF
    assert not check_gram_positivity("schrodinger", Params(m, c), 4).passed


def test_gram_negative_minor_at_quarter():
    _, g = gram_matrix("schrodinger", 4, Params(1, Fraction(1, 4)))
    assert leading_principal_minors(g)[5] == Fraction(-25, 64)


def test_gram_grading():
    report = check_gram_positivity("schrodinger", Params("3/2", "5/7"), 4)
    assert "schrodinger: Gram entries vanish across grades" not in _failed(report)


@pytest.mark.parametrize("x,alg,params,mu", [("X2", "sl2", Params(1, 1), ["1", "1", "2"]), ("X2", "schrodinger", Params(1, 1), ["1", "0", "1"])])
def test_two_by_two_hankel(x, alg, params, mu):
    report = hankel_positivity(x, 1, alg, params)
    assert report.checks[0].description.endswith("moments " + ", ".join(mu))
    assert report.passed


@given(c=positive)
def test_sl2_first_moments(c):
    p = Params(1, c)
    assert moments(observable("X2", "sl2", p), 2, "sl2", p) == [1, c, c * c + c]


@given(m=positive, c=positive)
def test_hankel_minors_strictly_positive(m, c):
    p = Params(m, c)
    for x, alg in (("X1", "hw"), ("X2", "sl2"), ("X2", "schrodinger"), ("X1", "schrodinger")):
        mu = moments(observable(x, alg, p), 6, alg, p)
        minors = leading_principal_minors(hankel_matrix(mu, 3))
        assert all(d > 0 for d in minors), (x, alg, minors)
