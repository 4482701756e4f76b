from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from berezin_kit.algebra import EnvElement, builtin
from berezin_kit.series import MultiSeries
from berezin_kit.weyl import WeylPoly

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ALGEBRAS = ("hw", "sl2", "schrodinger")

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=5))
nonzero_rationals = rationals.filter(lambda q: q != 0)
positive_rationals = st.builds(Fraction, st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=5))


@st.composite
def env_elements(draw, alg_name="schrodinger", max_terms=3, max_len=3):
    basis = builtin(alg_name).basis
    e = EnvElement()
    for _ in range(draw(st.integers(min_value=1, max_value=max_terms))):
        names = draw(st.lists(st.sampled_from(basis), min_size=0, max_size=max_len))
        e = e + EnvElement.word(*names, coeff=draw(nonzero_rationals))
    return e


@st.composite
def weyl_polys(draw, n=1, max_terms=3, max_exp=2):
    terms = {}
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_exp)] * n)
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        terms[(draw(exps), draw(exps))] = draw(rationals)
    return WeylPoly(n, terms)


@st.composite
def series(draw, vars=("x", "y"), cap=4, max_terms=4, unit=False):
    exps = st.tuples(*[st.integers(min_value=0, max_value=cap)] * len(vars)).filter(lambda e: sum(e) <= cap)
    coeffs = {draw(exps): draw(rationals) for _ in range(draw(st.integers(min_value=0, max_value=max_terms)))}
    s = MultiSeries(vars, cap, coeffs)
    if unit:
        s = s - s.constant_term + 1
    return s
