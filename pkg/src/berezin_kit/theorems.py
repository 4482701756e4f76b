"""Verification suites for the structural results.

* decoupling of an sl(2) triple from the Heisenberg part of the Schrodinger
  algebra, at the Weyl-algebra level (exact, untruncated) and at the level
  of Berezin transforms;
* formal self-adjointness of the distinguished observables;
* the Gaussian law of X + P in the m-HW Fock space and Hankel positivity of
  vacuum moments.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .algebra import EnvElement, LieAlgebraSpec, Params, builtin
from .berezin import berezin_from_fock, leibniz_from_fock, observable
from .fock import gram_matrix, is_positive_semidefinite, leading_principal_minors, moments
from .reports import Check, TheoremReport
from .series import MultiSeries, closed_form_berezin
from .weyl import WeylError, decoupled_closed_forms, decoupled_elements, decoupled_generators, hat_rep, weyl_commutator

HALF = Fraction(1, 2)


def _points(params: Params | Sequence[Params]) -> list[Params]:
    return [params] if isinstance(params, Params) else list(params)


def _series_check(description: str, lhs: MultiSeries, rhs: MultiSeries) -> Check:
    bad = lhs.mismatches(rhs)
    if not bad:
        return Check(description, True)
    k, a, b = bad[0]
    return Check(description, False, f"{len(bad)} coefficient(s) differ; first at {lhs.format_exps(k)}: {a} vs {b}")


def _poly_check(description: str, residual) -> Check:
    return Check(description, residual.is_zero(), None if residual.is_zero() else str(residual))


def check_decoupling(
    params: Params | Sequence[Params], cap: int = 6, rho0_shift: Fraction = HALF
) -> TheoremReport:
    """Subtraction identities, sl(2) relations, commutation with P_x, G, M and
    the (c - 1/2) transform forms.  ``rho0_shift`` exists to probe a wrong shift."""
    points = _points(params)
    checks: list[Check] = []
    for p in points:
        if p.m == 0:
            raise WeylError("m must be nonzero: the subtractions divide by 2m")
        tag = str(p)
        h = hat_rep("schrodinger", p)
        l0, r0, rho0 = decoupled_generators(h, check=False, rho0_shift=rho0_shift)
        for name, got, want in zip(("L0", "R0", "rho0"), (l0, r0, rho0), decoupled_closed_forms(p)):
            checks.append(_poly_check(f"{tag} hat subtraction {name} equals closed form", got - want))
        checks.append(_poly_check(f"{tag} [L0, R0] = rho0", weyl_commutator(l0, r0) - rho0))
        checks.append(_poly_check(f"{tag} [rho0, R0] = 2 R0", weyl_commutator(rho0, r0) - 2 * r0))
        checks.append(_poly_check(f"{tag} [L0, rho0] = 2 L0", weyl_commutator(l0, rho0) - 2 * l0))
        for (name, gen), other in itertools.product(zip(("L0", "R0", "rho0"), (l0, r0, rho0)), ("P_x", "G", "M")):
            checks.append(_poly_check(f"{tag} [{name}, {other}] = 0", weyl_commutator(gen, h(other))))

        elements = decoupled_elements(p, rho0_shift)
        sl2_point = Params(p.m, p.c - HALF)
        for name, sl2_name in (("L0", "L"), ("R0", "R"), ("rho0", "rho")):
            fock_side = berezin_from_fock(elements[name], "schrodinger", p, cap)
            closed = closed_form_berezin(name, "schrodinger", p, cap)
            checks.append(_series_check(f"{tag} <{name}> matches (c-1/2) closed form to degree {cap}", fock_side, closed))
            shadow = closed_form_berezin(sl2_name, "sl2", sl2_point, cap).extend(fock_side.vars)
            checks.append(_series_check(f"{tag} <{name}> equals sl2 <{sl2_name}> at c-1/2", fock_side, shadow))
            if p.c == HALF:
                checks.append(
                    Check(f"{tag} <{name}> vanishes identically at c = 1/2", fock_side.is_zero(), None if fock_side.is_zero() else str(fock_side))
                )
    return TheoremReport("decoupling", checks, [p.to_json() for p in points])


def check_self_adjointness(
    cap: int,
    params: Params | Sequence[Params],
    adjoint: Mapping[str, str] | None = None,
    gram_degree: int = 4,
    algebras: Sequence[str] = ("hw", "sl2", "schrodinger"),
) -> TheoremReport:
    """Berezin swap symmetry of the observables, adjointness of transform pairs and
    Gram symmetry.  ``adjoint`` overrides the Schrodinger raising/lowering pairing."""
    points = _points(params)
    checks: list[Check] = []
    for p in points:
        tag = str(p)
        for alg, names in (("hw", ["X1"]), ("sl2", ["X2"]), ("schrodinger", ["X1", "X2", "D"])):
            if alg not in algebras:
                continue
            adj = adjoint if alg == "schrodinger" else None
            ups = leibniz_from_fock(alg, p, cap, adj)
            checks.append(_series_check(f"{tag} {alg}: Upsilon is w<->v symmetric", ups, ups.swap_wv()))
            for name in names:
                b = berezin_from_fock(observable(name, alg, p), alg, p, cap, adj)
                checks.append(_series_check(f"{tag} {alg}: <{name}> is w<->v symmetric", b, b.swap_wv()))
            idx, g = gram_matrix(alg, gram_degree, p, adj)
            asym = [(idx[i], idx[j]) for i in range(len(idx)) for j in range(i) if g[i][j] != g[j][i]]
            checks.append(
                Check(f"{tag} {alg}: Gram matrix symmetric to degree {gram_degree}", not asym, str(asym[:5]) if asym else None)
            )
        if "schrodinger" not in algebras:
            continue
        adj = adjoint
        for raise_, lower in (("K", "P_t"), ("G", "P_x")):
            up = berezin_from_fock(raise_, "schrodinger", p, cap, adj)
            down = berezin_from_fock(lower, "schrodinger", p, cap, adj)
            checks.append(_series_check(f"{tag} schrodinger: <{raise_}> swapped equals <{lower}>", up.swap_wv(), down))
        # X2 is not the independent Gaussian form m (w2 + v2)
        x2 = berezin_from_fock("X2", "schrodinger", p, cap, adj)
        gaussian = (MultiSeries.variable(x2.vars, cap, "w2") + MultiSeries.variable(x2.vars, cap, "v2")).scale(p.m)
        differs = x2.coefficient(w2=1, v1=1) != gaussian.coefficient(w2=1, v1=1)
        checks.append(
            Check(f"{tag} schrodinger: <X2> differs from m(w2 + v2) at w2*v1", differs or p.m == 0,
                  None if differs else "coefficients agree")
        )
    return TheoremReport(f"self-adjointness:{'+'.join(algebras)}", checks, [p.to_json() for p in points])


def gaussian_moment(n: int, m: Fraction) -> Fraction:
    """m^(n/2) (n-1)!! for even n, 0 for odd n."""
    if n % 2:
        return Fraction(0)
    k = n // 2
    return Fraction(m) ** k * Fraction(factorial(n), 2**k * factorial(k))


GAUSSIAN_OBSERVABLES = {"hw": ("X1", "X+P"), "schrodinger": ("X2", "G+P_x")}


def gaussian_check(max_order: int, m: Fraction | Sequence[Fraction], alg: str = "hw", c: Fraction = Fraction(1)) -> TheoremReport:
    """Vacuum moments of X + P (hw) or G + P_x (schrodinger) against the normal law of variance m."""
    if max_order < 2 or max_order % 2:
        raise ValueError("max_order must be even and at least 2")
    if alg not in GAUSSIAN_OBSERVABLES:
        raise ValueError(f"no Gaussian observable for {alg}; have {sorted(GAUSSIAN_OBSERVABLES)}")
    name, label = GAUSSIAN_OBSERVABLES[alg]
    values = [Fraction(m)] if isinstance(m, (int, Fraction, str)) else [Fraction(x) for x in m]
    checks: list[Check] = []
    for mv in values:
        p = Params(mv, c)
        mu = moments(observable(name, alg, p), max_order, alg, p)
        for n in range(1, max_order + 1):
            want = gaussian_moment(n, mv)
            checks.append(Check(f"{alg} m={mv}: <Omega|({label})^{n}|Omega> = {want}", mu[n] == want, None if mu[n] == want else str(mu[n])))
        # phi(s) = sum i^n mu_n s^n / n!: the real part must be exp(-m s^2 / 2), the imaginary part zero
        s = MultiSeries.variable(("s",), max_order, "s")
        real = MultiSeries(("s",), max_order, {(n,): (-1) ** (n // 2) * mu[n] / factorial(n) for n in range(0, max_order + 1, 2)})
        imag_zero = all(mu[n] == 0 for n in range(1, max_order + 1, 2))
        target = (s * s).scale(-mv / 2).exp()
        checks.append(_series_check(f"{alg} m={mv}: phi(s) matches exp(-m s^2/2) to order {max_order}", real, target))
        checks.append(Check(f"{alg} m={mv}: phi(s) has no imaginary part to order {max_order}", imag_zero))
    return TheoremReport(f"gaussian:{alg}", checks, [Params(v, c).to_json() for v in values])


def hankel_matrix(mu: Sequence[Fraction], order: int) -> list[list[Fraction]]:
    return [[mu[i + j] for j in range(order + 1)] for i in range(order + 1)]


def hankel_positivity(
    x: EnvElement | str, order: int, alg: LieAlgebraSpec | str, params: Params
) -> TheoremReport:
    alg = builtin(alg) if isinstance(alg, str) else alg
    elem = observable(x, alg, params) if isinstance(x, str) else x
    mu = moments(elem, 2 * order, alg, params)
    hankel = hankel_matrix(mu, order)
    minors = leading_principal_minors(hankel)
    label = x if isinstance(x, str) else str(x)
    checks = [Check(f"{alg.name} {label}: moments {', '.join(map(str, mu))}", True)]
    for k, d in enumerate(minors, start=1):
        checks.append(Check(f"{alg.name} {label}: leading minor {k} = {d} >= 0", d >= 0, None if d >= 0 else str(d)))
    checks.append(Check(f"{alg.name} {label}: Hankel matrix is positive semidefinite", is_positive_semidefinite(hankel)))
    return TheoremReport(f"hankel:{alg.name}:{label}", checks, [params.to_json()])


def check_gram_positivity(alg: LieAlgebraSpec | str, params: Params, max_degree: int = 4) -> TheoremReport:
    """Exact minors and semidefiniteness of the truncated Gram matrix, plus its grading pattern."""
    alg = builtin(alg) if isinstance(alg, str) else alg
    idx, g = gram_matrix(alg, max_degree, params)
    minors = leading_principal_minors(g)
    checks = [
        Check(f"{alg.name}: leading minor {k} of Gram({max_degree}) = {d} >= 0", d >= 0, None if d >= 0 else str(d))
        for k, d in enumerate(minors, start=1)
    ]
    checks.append(Check(f"{alg.name}: Gram({max_degree}) positive semidefinite", is_positive_semidefinite(g)))
    weight = (lambda k: 2 * k[0] + k[1]) if alg.name == "schrodinger" else (lambda k: k)
    stray = [
        (a, b)
        for i, a in enumerate(idx)
        for j, b in enumerate(idx)
        if g[i][j] != 0 and weight(a) != weight(b)
    ]
    checks.append(Check(f"{alg.name}: Gram entries vanish across grades", not stray, str(stray[:5]) if stray else None))
    return TheoremReport(f"gram-positivity:{alg.name}", checks, [params.to_json()])

