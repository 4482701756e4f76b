"""Leibniz functions and Berezin transforms, computed from the Fock side and
checked against closed forms, defining PDEs and factorization formulas.

The Fock route never looks at a closed form: the Leibniz function is
assembled from Gram entries as ``sum gram(a, b) w^a v^b / (a! b!)`` and a
transform's numerator from matrix elements of the hat image between basis
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Mapping, Sequence

from .algebra import AlgebraError, EnvElement, LieAlgebraSpec, Params, builtin
from .fock import FockVector, apply, fock_model, indices_up_to
from .reports import ComparisonReport, DiscrepancyReport
from .series import MultiSeries, _Vars, berezin_form_names, closed_form_berezin, closed_form_leibniz, coherent_vars
from .weyl import WeylPoly, decoupled_elements, hat_rep

Index = tuple[int, ...]


def _alg(alg: LieAlgebraSpec | str) -> LieAlgebraSpec:
    return builtin(alg) if isinstance(alg, str) else alg


def _adjoint_key(adjoint: Mapping[str, str] | None):
    return tuple(sorted(adjoint.items())) if adjoint else None


def observable(name: str, alg: LieAlgebraSpec | str, params: Params) -> EnvElement:
    """Generators plus the named composite observables of each algebra."""
    alg = _alg(alg)
    if name in alg.basis:
        return EnvElement.gen(name)
    g = EnvElement.gen
    composites = {
        "hw": {"X1": lambda: g("X") + g("P")},
        "sl2": {"X2": lambda: g("R") + g("rho") + g("L")},
        "schrodinger": {
            "X1": lambda: g("P_t") + g("D") + g("K"),
            "X2": lambda: g("G") + g("P_x"),
            "L0": lambda: decoupled_elements(params)["L0"],
            "R0": lambda: decoupled_elements(params)["R0"],
            "rho0": lambda: decoupled_elements(params)["rho0"],
        },
    }.get(alg.name, {})
    if name not in composites:
        raise AlgebraError(f"unknown observable {name!r} for {alg.name}; have {list(alg.basis) + list(composites)}")
    return composites[name]()


def _fact(index: Index) -> int:
    return prod(factorial(k) for k in index)


# ---------------------------------------------------------------------------
# Fock route
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _leibniz_cached(alg: LieAlgebraSpec, params: Params, cap: int, adjoint) -> MultiSeries:
    model = fock_model(alg, params, dict(adjoint) if adjoint else None)
    vars = coherent_vars(alg)
    idx = indices_up_to(model.n, cap)
    coeffs = {}
    for beta in idx:
        for alpha in idx:
            if sum(alpha) + sum(beta) > cap:
                continue
            g = model.gram(alpha, beta)
            if g:
                coeffs[alpha + beta] = g / (_fact(alpha) * _fact(beta))
    return MultiSeries(vars, cap, coeffs)


def leibniz_from_fock(
    alg: LieAlgebraSpec | str, params: Params, cap: int, adjoint: Mapping[str, str] | None = None
) -> MultiSeries:
    return _leibniz_cached(_alg(alg), params, cap, _adjoint_key(adjoint))


def numerator_from_fock(
    x: EnvElement | str | WeylPoly,
    alg: LieAlgebraSpec | str,
    params: Params,
    cap: int,
    adjoint: Mapping[str, str] | None = None,
) -> MultiSeries:
    """<w| x |v> as a truncated series."""
    alg = _alg(alg)
    model = fock_model(alg, params, adjoint)
    if isinstance(x, str):
        x = observable(x, alg, params)
    op = x if isinstance(x, WeylPoly) else model.hat(x)
    idx = indices_up_to(model.n, cap)
    coeffs = {}
    for beta in idx:
        psi = apply(op, FockVector.basis(beta))
        for alpha in idx:
            if sum(alpha) + sum(beta) > cap:
                continue
            val = model.inner(alpha, psi)
            if val:
                coeffs[alpha + beta] = val / (_fact(alpha) * _fact(beta))
    return MultiSeries(coherent_vars(alg), cap, coeffs)


def berezin_from_fock(
    x: EnvElement | str | WeylPoly,
    alg: LieAlgebraSpec | str,
    params: Params,
    cap: int,
    adjoint: Mapping[str, str] | None = None,
) -> MultiSeries:
    num = numerator_from_fock(x, alg, params, cap, adjoint)
    return num / leibniz_from_fock(alg, params, cap, adjoint)


def compare(
    subject: str,
    lhs: MultiSeries,
    rhs: MultiSeries,
    lhs_source: str,
    rhs_source: str,
    params: Params,
    upto: int | None = None,
) -> ComparisonReport:
    upto = lhs.cap if upto is None else upto
    labelled = [(lhs.format_exps(k), a, b) for k, a, b in lhs.mismatches(rhs, upto)]
    return ComparisonReport(subject, lhs_source, rhs_source, upto, params.to_json(), labelled)


def check_leibniz_routes(alg: LieAlgebraSpec | str, params: Params, cap: int) -> ComparisonReport:
    alg = _alg(alg)
    return compare(
        f"leibniz-function:{alg.name}",
        leibniz_from_fock(alg, params, cap),
        closed_form_leibniz(alg, params, cap),
        "fock gram assembly",
        "closed form",
        params,
    )


def transform_names(alg: LieAlgebraSpec | str) -> list[str]:
    """Operators whose Fock-route transform is compared with a closed form."""
    return [n for n in berezin_form_names(alg) if n not in ("X1_printed", "L0", "R0", "rho0")]


def check_berezin_table(alg: LieAlgebraSpec | str, params: Params, cap: int) -> list:
    alg = _alg(alg)
    reports: list = []
    fock_side = {}
    for name in transform_names(alg):
        fock_side[name] = berezin_from_fock(name, alg, params, cap)
        reports.append(
            compare(
                f"berezin:{alg.name}:{name}",
                fock_side[name],
                closed_form_berezin(name, alg, params, cap),
                "fock matrix elements / fock leibniz",
                "closed form",
                params,
            )
        )
    if alg.name == "schrodinger":
        reports.append(printed_x1_discrepancy(params, cap, fock_side["X1"]))
    return reports


def printed_x1_discrepancy(params: Params, cap: int, fock_x1: MultiSeries | None = None) -> DiscrepancyReport:
    """The printed <X1> has m where <P_t> + <D> + <K> gives m/2."""
    fock_x1 = fock_x1 if fock_x1 is not None else berezin_from_fock("X1", "schrodinger", params, cap)
    printed = closed_form_berezin("X1_printed", "schrodinger", params, cap)
    mismatches = [(printed.format_exps(k), a, b) for k, a, b in printed.mismatches(fock_x1)]
    return DiscrepancyReport(
        "berezin:schrodinger:X1-printed",
        "printed quadratic coefficient m versus m/2 from summing the P_t, D and K transforms",
        cap,
        params.to_json(),
        predicted_mismatch=params.m != 0,
        mismatches=mismatches,
    )


def check_log_derivatives(alg: LieAlgebraSpec | str, params: Params, cap: int) -> list[ComparisonReport]:
    """<R_j> = d log(Upsilon)/dv_j and <L_j> = d log(Upsilon)/dw_j."""
    alg = _alg(alg)
    model = fock_model(alg, params)
    log_u = leibniz_from_fock(alg, params, cap).log()
    vars = coherent_vars(alg)
    n = model.n
    out = []
    for i, r in enumerate(model.raising):
        for gen, var in ((r, vars[n + i]), (model.adjoint[r], vars[i])):
            out.append(
                compare(
                    f"log-derivative:{alg.name}:{gen}",
                    berezin_from_fock(gen, alg, params, cap).truncate(cap - 1),
                    log_u.derivative(var),
                    "fock transform",
                    f"d log(Upsilon)/d{var}",
                    params,
                )
            )
    return out


# ---------------------------------------------------------------------------
# Defining PDEs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DefiningPDE:
    """d Upsilon / d wrt = sum coeff * monomial * (d Upsilon / d deriv, or Upsilon)."""

    name: str
    wrt: str
    terms: tuple[tuple[Fraction, tuple[tuple[str, int], ...], str | None], ...]


def defining_pdes(alg: LieAlgebraSpec | str, params: Params) -> list[DefiningPDE]:
    alg = _alg(alg)
    m, c = params.m, params.c
    if alg.name == "hw":
        return [DefiningPDE("hw:dw", "w1", ((m, (("v1", 1),), None),))]
    if alg.name == "sl2":
        return [DefiningPDE("sl2:dw", "w1", ((c, (("v1", 1),), None), (Fraction(1), (("v1", 2),), "v1")))]
    return [
        DefiningPDE(
            "schrodinger:dw1",
            "w1",
            (
                (Fraction(1), (("v1", 2),), "v1"),
                (Fraction(1), (("v1", 1), ("v2", 1)), "v2"),
                (c, (("v1", 1),), None),
                (m / 2, (("v2", 2),), None),
            ),
        ),
        DefiningPDE(
            "schrodinger:dw2",
            "w2",
            ((Fraction(1), (("v1", 1),), "v2"), (m, (("v2", 1),), None)),
        ),
    ]


def check_defining_pdes(
    alg: LieAlgebraSpec | str,
    params: Params,
    cap: int,
    pdes: Sequence[DefiningPDE] | None = None,
) -> list[ComparisonReport]:
    alg = _alg(alg)
    ups = closed_form_leibniz(alg, params, cap)
    low = cap - 1
    base = ups.truncate(low)
    reports = []
    for pde in pdes if pdes is not None else defining_pdes(alg, params):
        lhs = ups.derivative(pde.wrt)
        rhs = MultiSeries(ups.vars, low)
        for coeff, mono, deriv in pde.terms:
            factor = MultiSeries.monomial(ups.vars, low, coeff, **dict(mono))
            rhs = rhs + factor * (ups.derivative(deriv) if deriv else base)
        reports.append(
            compare(f"pde:{pde.name}", lhs, rhs, f"dUpsilon/d{pde.wrt}", "right-hand side", params, low)
        )
    return reports


# ---------------------------------------------------------------------------
# Factorization (Leibniz) formulas applied to states
# ---------------------------------------------------------------------------


class FockSeries:
    """Fock-vector valued truncated series in the formal group parameters."""

    def __init__(self, n: int, vars: Sequence[str], cap: int, comps: Mapping[Index, MultiSeries] | None = None):
        self.n, self.vars, self.cap = n, tuple(vars), cap
        self.comps = {k: s for k, s in (comps or {}).items() if not s.is_zero()}

    @classmethod
    def state(cls, vec: FockVector, vars: Sequence[str], cap: int) -> FockSeries:
        return cls(vec.n, vars, cap, {k: MultiSeries.constant(vars, cap, q) for k, q in vec.entries.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: FockSeries) -> FockSeries:
        out = dict(self.comps)
        for k, s in other.comps.items():
            out[k] = out[k] + s if k in out else s
        return FockSeries(self.n, self.vars, self.cap, out)

    def times(self, s: MultiSeries | Fraction) -> FockSeries:
        return FockSeries(self.n, self.vars, self.cap, {k: v * s for k, v in self.comps.items()})

    def apply(self, op: WeylPoly) -> FockSeries:
        out: dict[Index, MultiSeries] = {}
        for k, s in self.comps.items():
            for j, q in apply(op, FockVector.basis(k)).entries.items():
                term = s.scale(q)
                out[j] = out[j] + term if j in out else term
        return FockSeries(self.n, self.vars, self.cap, out)

    def exp_action(self, generator: Sequence[tuple[MultiSeries, WeylPoly]]) -> FockSeries:
        """exp(sum_i s_i op_i) applied to this family; every s_i must vanish at 0."""
        for s, _ in generator:
            if s.constant_term:
                raise ValueError("exponent coefficients need zero constant term")
        total, term = self, self
        for k in range(1, self.cap + 1):
            nxt = FockSeries(self.n, self.vars, self.cap)
            for s, op in generator:
                nxt = nxt + term.apply(op).times(s)
            term = nxt.times(Fraction(1, k))
            if term.is_zero():
                break
            total = total + term
        return total

    def diagonal_power(self, base: MultiSeries, op: WeylPoly) -> FockSeries:
        """base^op for an operator diagonal in the Fock basis (base has unit constant term)."""
        out = {}
        for k, s in self.comps.items():
            image = apply(op, FockVector.basis(k))
            if set(image.entries) - {k}:
                raise ValueError(f"operator {op} is not diagonal at {k}")
            out[k] = s * base.power(image.entries.get(k, Fraction(0)))
        return FockSeries(self.n, self.vars, self.cap, out)

    def mismatches(self, other: FockSeries) -> list[tuple[str, Fraction, Fraction]]:
        zero = MultiSeries(self.vars, self.cap)
        out = []
        for k in sorted(set(self.comps) | set(other.comps)):
            a, b = self.comps.get(k, zero), other.comps.get(k, zero)
            for exps, x, y in a.mismatches(b):
                out.append((sum(exps), k, exps, x, y))
        out.sort(key=lambda t: t[:3])
        return [(f"|{','.join(map(str, k))}> * {zero.format_exps(e)}", x, y) for _, k, e, x, y in out]


def _series_report(subject: str, lhs: FockSeries, rhs: FockSeries, params: Params, rhs_source: str) -> ComparisonReport:
    return ComparisonReport(subject, "left factorization", rhs_source, lhs.cap, params.to_json(), lhs.mismatches(rhs))


def _start_states(n: int, starts: Sequence[Index] | None) -> list[FockVector]:
    return [FockVector.basis(s) for s in (starts or [(0,) * n])]


def check_weyl_formula(params: Params, cap: int) -> ComparisonReport:
    """e^{wP} e^{vX} = e^{vX} e^{m w v} e^{wP} on the vacuum of the m-HW Fock space."""
    h = hat_rep("hw", params)
    x = _Vars(("w", "v"), cap)
    vac = FockSeries.state(FockVector.vacuum(1), x.vars, cap)
    lhs = vac.exp_action([(x.v, h("X"))]).exp_action([(x.w, h("P"))])
    rhs = vac.exp_action([(x.w, h("P"))]).times((x.w * x.v).scale(params.m).exp()).exp_action([(x.v, h("X"))])
    return _series_report("leibniz-formula:hw:weyl", lhs, rhs, params, "e^{vX} e^{mwv} e^{wP}")


def check_hw_exponential(
    params: Params, cap: int, alg: str = "hw", starts: Sequence[Index] | None = None
) -> list[ComparisonReport]:
    """exp(aP + bX) = e^{bX} e^{mab/2} e^{aP}, with (P, X) = (P_x, G) in the Schrodinger algebra."""
    h = hat_rep(alg, params)
    lower, upper = ("P", "X") if alg == "hw" else ("P_x", "G")
    x = _Vars(("a", "b"), cap)
    n = h.n
    out = []
    for start in _start_states(n, starts):
        s = FockSeries.state(start, x.vars, cap)
        lhs = s.exp_action([(x.a, h(lower)), (x.b, h(upper))])
        rhs = s.exp_action([(x.a, h(lower))]).times((x.a * x.b).scale(params.m / 2).exp()).exp_action(
            [(x.b, h(upper))]
        )
        label = ",".join(map(str, next(iter(start.entries))))
        out.append(_series_report(f"leibniz-formula:{alg}:hw-exponential@|{label}>", lhs, rhs, params, "e^{bX} e^{mab/2} e^{aP}"))
    return out


def check_sl2_formula(
    params: Params, cap: int, alg: str = "sl2", starts: Sequence[Index] | None = None
) -> list[ComparisonReport]:
    """e^{wL} e^{vR} = exp(v/(1-wv) R) (1-wv)^{-rho} exp(w/(1-wv) L) on Fock states.

    In the Schrodinger algebra the same formula is checked for (P_t, K, D).
    """
    h = hat_rep(alg, params)
    low, up, diag = ("L", "R", "rho") if alg == "sl2" else ("P_t", "K", "D")
    x = _Vars(("w", "v"), cap)
    u = 1 - x.w * x.v
    out = []
    for start in _start_states(h.n, starts):
        s = FockSeries.state(start, x.vars, cap)
        lhs = s.exp_action([(x.v, h(up))]).exp_action([(x.w, h(low))])
        rhs = (
            s.exp_action([(x.w / u, h(low))])
            .diagonal_power(u.power(-1), h(diag))
            .exp_action([(x.v / u, h(up))])
        )
        label = ",".join(map(str, next(iter(start.entries))))
        out.append(_series_report(f"leibniz-formula:{alg}:sl2@|{label}>", lhs, rhs, params, "exp(v~ R) (1-wv)^-rho exp(w~ L)"))
    return out


def sl2_matrices() -> dict[str, list[list[Fraction]]]:
    """A 2x2 realization satisfying [L,R] = rho, [rho,R] = 2R, [L,rho] = 2L."""
    one = Fraction(1)
    return {
        "R": [[0, one], [0, 0]],
        "L": [[0, 0], [-one, 0]],
        "rho": [[one, 0], [0, -one]],
    }


def _mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(2)), 0) for j in range(2)] for i in range(2)]


def _mat_exp(s: MultiSeries, mat) -> list[list[MultiSeries]]:
    """exp(s * mat) for a constant 2x2 matrix and a series s vanishing at 0."""
    one = MultiSeries.constant(s.vars, s.cap, 1)
    zero = MultiSeries(s.vars, s.cap)
    total = [[one, zero], [zero, one]]
    term = [[one, zero], [zero, one]]
    for k in range(1, s.cap + 1):
        term = [[sum((term[i][l] * mat[l][j] for l in range(2)), zero) * s / k for j in range(2)] for i in range(2)]
        if all(e.is_zero() for row in term for e in row):
            break
        total = [[total[i][j] + term[i][j] for j in range(2)] for i in range(2)]
    return total


def check_sl2_matrix_route(params: Params, cap: int) -> ComparisonReport:
    mats = sl2_matrices()
    L, R, rho = mats["L"], mats["R"], mats["rho"]

    def sub(a, b):
        return [[a[i][j] - b[i][j] for j in range(2)] for i in range(2)]

    relations_ok = (
        sub(_mat_mul(L, R), _mat_mul(R, L)) == rho
        and sub(_mat_mul(rho, R), _mat_mul(R, rho)) == [[2 * e for e in row] for row in R]
        and sub(_mat_mul(L, rho), _mat_mul(rho, L)) == [[2 * e for e in row] for row in L]
    )
    x = _Vars(("w", "v"), cap)
    u = 1 - x.w * x.v
    zero = MultiSeries(x.vars, cap)
    lhs = _series_mat_mul(_mat_exp(x.w, L), _mat_exp(x.v, R))
    dil = [[u.power(-rho[0][0]), zero], [zero, u.power(-rho[1][1])]]
    rhs = _series_mat_mul(_series_mat_mul(_mat_exp(x.v / u, R), dil), _mat_exp(x.w / u, L))
    mismatches = []
    if not relations_ok:
        mismatches.append(("matrix relations", Fraction(0), Fraction(1)))
    for i in range(2):
        for j in range(2):
            for k, a, b in lhs[i][j].mismatches(rhs[i][j]):
                mismatches.append((f"entry({i},{j}) * {zero.format_exps(k)}", a, b))
    return ComparisonReport(
        "leibniz-formula:sl2:2x2-matrices", "e^{wL} e^{vR}", "exp(v~ R) (1-wv)^-rho exp(w~ L)", cap, params.to_json(), mismatches
    )


def _series_mat_mul(a, b):
    zero = MultiSeries(a[0][0].vars, a[0][0].cap)
    return [[sum((a[i][k] * b[k][j] for k in range(2)), zero) for j in range(2)] for i in range(2)]


def _lemma_sides(params: Params, cap: int, exponent_factor: Fraction) -> tuple[FockSeries, FockSeries]:
    h = hat_rep("schrodinger", params)
    x = _Vars(("w1", "w2", "v1", "v2"), cap)
    u = 1 - x.w1 * x.v1
    vac = FockSeries.state(FockVector.vacuum(2), x.vars, cap)
    lhs = vac.exp_action([(x.v1, h("K")), (x.v2, h("G"))]).exp_action([(x.w1, h("P_t")), (x.w2, h("P_x"))])
    quad = (x.w1 * x.v2 * x.v2 + 2 * x.w2 * x.v2 + x.w2 * x.w2 * x.v1) / u
    t1, t2 = x.v1 / u, x.v2 / u
    prefactor = u.power(-params.c) * quad.scale(exponent_factor).exp()
    rhs = vac.exp_action([(t1, h("K")), (t2 + x.w2 * t1, h("G"))]).times(prefactor)
    return lhs, rhs


def check_schrodinger_lemma(params: Params, cap: int) -> ComparisonReport:
    """Vacuum factorization with the single m/2 in the exponent (the reading consistent
    with the Leibniz function, the defining PDEs and the transform table)."""
    lhs, rhs = _lemma_sides(params, cap, params.m / 2)
    return _series_report("leibniz-formula:schrodinger:lemma", lhs, rhs, params, "Upsilon * exp(v~1 K + (v~2 + w2 v~1) G)")


def lemma_raw_discrepancy(params: Params, cap: int) -> DiscrepancyReport:
    """The printed exponent (m/2) * q~ with q~ already carrying m/2."""
    lhs, rhs = _lemma_sides(params, cap, (params.m / 2) ** 2)
    mismatches = rhs.mismatches(lhs)
    return DiscrepancyReport(
        "leibniz-formula:schrodinger:lemma-printed",
        "printed exponent (m/2)*q~ with q~ = (m/2)*(...)/(1-w1 v1), i.e. a (m/2)^2 prefactor",
        cap,
        params.to_json(),
        predicted_mismatch=(params.m / 2) ** 2 != params.m / 2,
        mismatches=mismatches,
    )


def check_leibniz_formula(alg: LieAlgebraSpec | str, cap: int, params: Params) -> list:
    alg = _alg(alg)
    if alg.name == "hw":
        return [check_weyl_formula(params, cap), *check_hw_exponential(params, cap)]
    if alg.name == "sl2":
        return [*check_sl2_formula(params, cap, starts=[(0,), (1,), (2,)]), check_sl2_matrix_route(params, cap)]
    return [
        *check_hw_exponential(params, cap, "schrodinger", starts=[(0, 0), (1, 0)]),
        *check_sl2_formula(params, cap, "schrodinger", starts=[(0, 0), (0, 1)]),
        check_schrodinger_lemma(params, cap),
        lemma_raw_discrepancy(params, cap),
    ]
