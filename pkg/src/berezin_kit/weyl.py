"""Normal-ordered Weyl algebra in ladder pairs and the hat-representation.

A monomial ``(a, b)`` stands for ``R_1^a_1 ... R_n^a_n V_1^b_1 ... V_n^b_n``
with every raising operator ``R`` to the left of every lowering operator
``V``, subject to ``V_i R_i = R_i V_i + 1`` and commutation across distinct
indices.  Products are re-normal-ordered eagerly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from types import MappingProxyType
from typing import Mapping

from .algebra import AlgebraError, EnvElement, LieAlgebraSpec, Params, bracket, builtin
from .reports import Check, Report

Exps = tuple[int, ...]
Monomial = tuple[Exps, Exps]
Scalar = int | Fraction


class WeylError(ValueError):
    pass


class IdentityError(AssertionError):
    """A closed-form identity that should hold exactly did not."""


class WeylPoly:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.n = n
        store: dict[Monomial, Fraction] = {}
        for (a, b), coeff in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != n or len(b) != n:
                raise WeylError(f"monomial {(a, b)} does not have {n} pairs")
            store[(a, b)] = store.get((a, b), Fraction(0)) + Fraction(coeff)
        self._terms = MappingProxyType({k: v for k, v in store.items() if v})

    @classmethod
    def const(cls, n: int, q: Scalar) -> WeylPoly:
        return cls(n, {((0,) * n, (0,) * n): q})

    @classmethod
    def raising(cls, n: int, i: int) -> WeylPoly:
        """R_i, 1-based."""
        return cls(n, {(_unit(n, i), (0,) * n): 1})

    @classmethod
    def lowering(cls, n: int, i: int) -> WeylPoly:
        """V_i, 1-based."""
        return cls(n, {((0,) * n, _unit(n, i)): 1})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def degree_raise(self) -> int:
        """Largest increase of total Fock degree produced by a single term."""
        return max((sum(a) - sum(b) for a, b in self._terms), default=0)

    def _coerce(self, other) -> WeylPoly:
        if isinstance(other, WeylPoly):
            if other.n != self.n:
                raise WeylError(f"pair count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return WeylPoly.const(self.n, other)
        return NotImplemented

    def __add__(self, other) -> WeylPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return WeylPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> WeylPoly:
        return WeylPoly(self.n, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> WeylPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> WeylPoly:
        return (-self) + other

    def __mul__(self, other) -> WeylPoly:
        if isinstance(other, (int, Fraction)):
            return WeylPoly(self.n, {k: v * other for k, v in self._terms.items()})
        return weyl_mul(self, other)

    def __rmul__(self, other) -> WeylPoly:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, q: Scalar) -> WeylPoly:
        return self * (Fraction(1) / Fraction(q))

    def __pow__(self, k: int) -> WeylPoly:
        out = WeylPoly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = WeylPoly.const(self.n, other)
        if not isinstance(other, WeylPoly):
            return NotImplemented
        return self.n == other.n and dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def to_json(self) -> list[dict]:
        return [
            {"coeff": str(c), "r_exps": list(a), "v_exps": list(b)} for (a, b), c in sorted(self._terms.items())
        ]

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._terms.items(), key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), kv[0])):
            factors = [_power(f"R{i + 1}", e) for i, e in enumerate(a) if e]
            factors += [_power(f"V{i + 1}", e) for i, e in enumerate(b) if e]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _unit(n: int, i: int) -> Exps:
    if not 1 <= i <= n:
        raise WeylError(f"pair index {i} out of range 1..{n}")
    return tuple(int(j == i - 1) for j in range(n))


def _power(sym: str, e: int) -> str:
    return sym if e == 1 else f"{sym}^{e}"


def _swap_expansion(b: int, c: int) -> list[tuple[int, int, int]]:
    """V^b R^c = sum_k C(b,k) c!/(c-k)! R^(c-k) V^(b-k), as (r_exp, v_exp, coeff) triples."""
    return [(c - k, b - k, comb(b, k) * factorial(c) // factorial(c - k)) for k in range(min(b, c) + 1)]


def weyl_mul(a: WeylPoly, b: WeylPoly) -> WeylPoly:
    if not isinstance(a, WeylPoly) or not isinstance(b, WeylPoly):
        raise WeylError("weyl_mul expects two WeylPoly operands")
    if a.n != b.n:
        raise WeylError(f"pair count mismatch: {a.n} vs {b.n}")
    n = a.n
    out: dict[Monomial, Fraction] = {}
    for (ra, va), ca in a.terms.items():
        for (rb, vb), cb in b.terms.items():
            per_index = [_swap_expansion(va[i], rb[i]) for i in range(n)]
            for choice in itertools.product(*per_index):
                r = tuple(ra[i] + choice[i][0] for i in range(n))
                v = tuple(choice[i][1] + vb[i] for i in range(n))
                coeff = ca * cb
                for _, _, k in choice:
                    coeff *= k
                out[(r, v)] = out.get((r, v), 0) + coeff
    return WeylPoly(n, out)


def weyl_commutator(a: WeylPoly, b: WeylPoly) -> WeylPoly:
    return weyl_mul(a, b) - weyl_mul(b, a)


# ---------------------------------------------------------------------------
# Hat-representation
# ---------------------------------------------------------------------------

PAIRS = {"hw": 1, "sl2": 1, "schrodinger": 2}


@dataclass(frozen=True)
class HatMap:
    algebra: LieAlgebraSpec
    params: Params
    assignment: Mapping[str, WeylPoly]

    @property
    def n(self) -> int:
        return next(iter(self.assignment.values())).n

    def __call__(self, x: EnvElement | str) -> WeylPoly:
        if isinstance(x, str):
            x = self.algebra.gen(x)
        total = WeylPoly.const(self.n, 0)
        for word, coeff in x.terms.items():
            term = WeylPoly.const(self.n, coeff)
            for g in word:
                if g not in self.assignment:
                    raise AlgebraError(f"generator {g!r} has no hat image in {self.algebra.name}")
                term = term * self.assignment[g]
            total = total + term
        return total

    def replace(self, **images: WeylPoly) -> HatMap:
        table = dict(self.assignment)
        table.update(images)
        return HatMap(self.algebra, self.params, MappingProxyType(table))


def hat_rep(alg: LieAlgebraSpec | str, params: Params) -> HatMap:
    if isinstance(alg, str):
        alg = builtin(alg)
    if alg.name not in PAIRS or alg.basis != builtin(alg.name).basis:
        raise AlgebraError(f"no hat-representation for algebra {alg.name!r}; only builtins are supported")
    m, c = params.m, params.c
    n = PAIRS[alg.name]
    R = [WeylPoly.raising(n, i) for i in range(1, n + 1)]
    V = [WeylPoly.lowering(n, i) for i in range(1, n + 1)]
    one = WeylPoly.const(n, 1)
    if alg.name == "hw":
        table = {"X": R[0], "H": one * m, "P": V[0] * m}
    elif alg.name == "sl2":
        table = {"R": R[0], "L": V[0] * c + R[0] * V[0] * V[0], "rho": one * c + 2 * R[0] * V[0]}
    else:
        R1, R2 = R
        V1, V2 = V
        table = {
            "P_t": V1 * c + V2 * V2 * (m / 2) + (R1 * V1 + R2 * V2) * V1,
            "K": R1,
            "D": one * c + 2 * R1 * V1 + R2 * V2,
            "P_x": V2 * m + R2 * V1,
            "G": R2,
            "M": one * m,
        }
    return HatMap(alg, params, MappingProxyType(table))


def hat_residual(h: HatMap, x: str, y: str, alg: LieAlgebraSpec | None = None) -> WeylPoly:
    """[h(x), h(y)] - h([x, y]) computed against ``alg`` (default: h's algebra)."""
    alg = alg or h.algebra
    return weyl_commutator(h(x), h(y)) - h(bracket(x, y, alg))


def check_homomorphism(h: HatMap, alg: LieAlgebraSpec | None = None) -> Report:
    alg = alg or h.algebra
    checks = []
    for x, y in itertools.combinations(alg.basis, 2):
        res = hat_residual(h, x, y, alg)
        checks.append(Check(f"[{x}^, {y}^] = [{x}, {y}]^", res.is_zero(), None if res.is_zero() else str(res)))
    return Report(f"homomorphism:{alg.name}{h.params}", checks)


# ---------------------------------------------------------------------------
# Decoupled sl(2) inside the Schrodinger hat-representation
# ---------------------------------------------------------------------------


def decoupled_closed_forms(params: Params) -> tuple[WeylPoly, WeylPoly, WeylPoly]:
    """Right-hand sides in terms of R0 = R1 - R2^2/(2m)."""
    m, c = params.m, params.c
    if m == 0:
        raise WeylError("m must be nonzero: the subtractions divide by 2m")
    half = Fraction(1, 2)
    R1, R2 = WeylPoly.raising(2, 1), WeylPoly.raising(2, 2)
    V1 = WeylPoly.lowering(2, 1)
    r0 = R1 - R2 * R2 / (2 * m)
    return (V1 * (c - half) + r0 * V1 * V1, r0, WeylPoly.const(2, c - half) + 2 * r0 * V1)


def decoupled_generators(
    h: HatMap, check: bool = True, rho0_shift: Fraction = Fraction(1, 2)
) -> tuple[WeylPoly, WeylPoly, WeylPoly]:
    """(L0, R0, rho0) from the subtractions applied to the hat images.

    With ``check`` the results are compared against the closed forms and an
    :class:`IdentityError` is raised on any difference.
    """
    if h.algebra.name != "schrodinger":
        raise AlgebraError("decoupling is defined for the schrodinger algebra only")
    m = h.params.m
    if m == 0:
        raise WeylError("m must be nonzero: the subtractions divide by 2m")
    Pt, Px, K, G, D = (h(g) for g in ("P_t", "P_x", "K", "G", "D"))
    l0 = Pt - Px * Px / (2 * m)
    r0 = K - G * G / (2 * m)
    rho0 = D - G * Px / m - rho0_shift
    if check:
        for label, got, want in zip(("L0", "R0", "rho0"), (l0, r0, rho0), decoupled_closed_forms(h.params)):
            if got != want:
                raise IdentityError(f"{label}: subtraction gives {got}, closed form is {want}")
    return l0, r0, rho0


def decoupled_elements(params: Params, rho0_shift: Fraction = Fraction(1, 2)) -> dict[str, EnvElement]:
    """L0, R0, rho0 as enveloping-algebra elements of the Schrodinger algebra."""
    m = params.m
    if m == 0:
        raise WeylError("m must be nonzero: the subtractions divide by 2m")
    g = EnvElement.gen
    return {
        "L0": g("P_t") - g("P_x") * g("P_x") / (2 * m),
        "R0": g("K") - g("G") * g("G") / (2 * m),
        "rho0": g("D") - g("G") * g("P_x") / m - rho0_shift,
    }
