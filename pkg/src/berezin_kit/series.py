"""Truncated multivariate formal power series over the rationals.

A :class:`MultiSeries` stores the coefficients of all monomials of total
degree ``<= cap`` in a fixed, ordered tuple of variables.  Arithmetic is
closed under that truncation: nothing above ``cap`` is ever read or written.

The closed-form Leibniz functions and Berezin transforms of the three
built-in algebras live at the bottom of the module; they are built only from
series arithmetic and never touch the Fock-space side.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .algebra import LieAlgebraSpec, Params, builtin

Exps = tuple[int, ...]
Scalar = int | Fraction

DEFAULT_CAP = 8
COHERENT_VARS = {
    "hw": ("w1", "v1"),
    "sl2": ("w1", "v1"),
    "schrodinger": ("w1", "w2", "v1", "v2"),
}


class SeriesError(ValueError):
    pass


class MultiSeries:
    """Exact series truncated at total degree ``cap``."""

    __slots__ = ("vars", "cap", "_coeffs")

    def __init__(self, vars: Iterable[str], cap: int, coeffs: Mapping[Exps, Scalar] | None = None):
        self.vars = tuple(vars)
        self.cap = int(cap)
        if self.cap < 0:
            raise SeriesError("cap must be nonnegative")
        store: dict[Exps, Fraction] = {}
        for exps, value in (coeffs or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise SeriesError(f"exponent {exps} does not match variables {self.vars}")
            if sum(exps) > self.cap or not value:
                continue
            store[exps] = store.get(exps, Fraction(0)) + Fraction(value)
        self._coeffs = {k: v for k, v in store.items() if v}

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, vars: Iterable[str], cap: int, value: Scalar) -> MultiSeries:
        vars = tuple(vars)
        return cls(vars, cap, {(0,) * len(vars): value})

    @classmethod
    def variable(cls, vars: Iterable[str], cap: int, name: str) -> MultiSeries:
        vars = tuple(vars)
        if name not in vars:
            raise SeriesError(f"unknown variable {name!r}; have {vars}")
        exps = tuple(int(v == name) for v in vars)
        return cls(vars, cap, {exps: 1})

    @classmethod
    def monomial(cls, vars: Iterable[str], cap: int, coeff: Scalar = 1, **powers: int) -> MultiSeries:
        vars = tuple(vars)
        unknown = set(powers) - set(vars)
        if unknown:
            raise SeriesError(f"unknown variables {sorted(unknown)}; have {vars}")
        exps = tuple(powers.get(v, 0) for v in vars)
        return cls(vars, cap, {exps: coeff})

    def _like(self, coeffs: Mapping[Exps, Scalar]) -> MultiSeries:
        return MultiSeries(self.vars, self.cap, coeffs)

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[Exps, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, exps: Exps | None = None, **powers: int) -> Fraction:
        if exps is None:
            exps = tuple(powers.get(v, 0) for v in self.vars)
        return self._coeffs.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.vars))

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self._coeffs), default=None)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: MultiSeries) -> None:
        if self.vars != other.vars or self.cap != other.cap:
            raise SeriesError(
                f"series mismatch: vars {self.vars}/cap {self.cap} vs vars {other.vars}/cap {other.cap}"
            )

    def _coerce(self, other) -> MultiSeries:
        if isinstance(other, MultiSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiSeries.constant(self.vars, self.cap, other)
        return NotImplemented

    def __add__(self, other) -> MultiSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> MultiSeries:
        return self._like({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other) -> MultiSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> MultiSeries:
        return (-self) + other

    def __mul__(self, other) -> MultiSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap = self.cap
        right = sorted(((sum(k), k, v) for k, v in other._coeffs.items()))
        out: dict[Exps, Fraction] = {}
        for ka, va in self._coeffs.items():
            room = cap - sum(ka)
            for db, kb, vb in right:
                if db > room:
                    break
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
        return self._like(out)

    __rmul__ = __mul__

    def scale(self, q: Scalar) -> MultiSeries:
        q = Fraction(q)
        return self._like({k: v * q for k, v in self._coeffs.items()})

    def __truediv__(self, other) -> MultiSeries:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self.scale(Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> MultiSeries:
        return self.reciprocal() * other

    def __pow__(self, k: int) -> MultiSeries:
        if not isinstance(k, int) or k < 0:
            raise SeriesError("integer powers must be nonnegative; use power() for rational exponents")
        result = MultiSeries.constant(self.vars, self.cap, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self) -> MultiSeries:
        a0 = self.constant_term
        if a0 == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        # 1/(a0 (1 + u)) = (1/a0) sum (-u)^k
        u = self.scale(1 / a0) - 1
        return _geometric_sum(-u).scale(1 / a0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.vars == other.vars and self.cap == other.cap and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.vars, self.cap, frozenset(self._coeffs.items())))

    # -- transcendental operations ------------------------------------------

    def exp(self) -> MultiSeries:
        if self.constant_term != 0:
            raise SeriesError("exp requires zero constant term")
        total = MultiSeries.constant(self.vars, self.cap, 1)
        term = total
        for k in range(1, self.cap + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            total = total + term
        return total

    def log(self) -> MultiSeries:
        if self.constant_term != 1:
            raise SeriesError("log requires unit constant term")
        u = self - 1
        total = self._like({})
        power = MultiSeries.constant(self.vars, self.cap, 1)
        for k in range(1, self.cap + 1):
            power = power * u
            if power.is_zero():
                break
            total = total + power.scale(Fraction((-1) ** (k + 1), k))
        return total

    def power(self, exponent: Scalar) -> MultiSeries:
        """Rational power of a series with unit constant term, as exp(r log f)."""
        exponent = Fraction(exponent)
        if self.constant_term != 1:
            raise SeriesError("rational powers require unit constant term")
        return self.log().scale(exponent).exp()

    # -- calculus and substitutions -----------------------------------------

    def derivative(self, name: str) -> MultiSeries:
        """Formal partial derivative, returned at cap - 1."""
        if name not in self.vars:
            raise SeriesError(f"unknown variable {name!r}; have {self.vars}")
        i = self.vars.index(name)
        out = {}
        for k, v in self._coeffs.items():
            if k[i]:
                key = k[:i] + (k[i] - 1,) + k[i + 1 :]
                out[key] = v * k[i]
        return MultiSeries(self.vars, max(self.cap - 1, 0), out)

    def truncate(self, cap: int) -> MultiSeries:
        if cap > self.cap:
            raise SeriesError(f"cannot raise cap from {self.cap} to {cap}")
        return MultiSeries(self.vars, cap, self._coeffs)

    def rename(self, mapping: Mapping[str, str]) -> MultiSeries:
        """Permute variables: the coefficient of ``x`` moves to ``mapping[x]``."""
        targets = [mapping.get(v, v) for v in self.vars]
        if sorted(targets) != sorted(self.vars):
            raise SeriesError(f"{mapping} is not a permutation of {self.vars}")
        perm = [targets.index(v) for v in self.vars]
        return self._like({tuple(k[j] for j in perm): v for k, v in self._coeffs.items()})

    def extend(self, vars: Iterable[str]) -> MultiSeries:
        """The same series viewed in a larger variable set."""
        vars = tuple(vars)
        missing = set(self.vars) - set(vars)
        if missing:
            raise SeriesError(f"variables {sorted(missing)} not in {vars}")
        pos = [vars.index(v) for v in self.vars]
        out = {}
        for k, c in self._coeffs.items():
            e = [0] * len(vars)
            for p, x in zip(pos, k):
                e[p] = x
            out[tuple(e)] = c
        return MultiSeries(vars, self.cap, out)

    def swap_wv(self) -> MultiSeries:
        """Exchange every w_i with v_i."""
        mapping = {}
        for v in self.vars:
            if v[0] in "wv" and v[1:].isdigit():
                mapping[v] = ("v" if v[0] == "w" else "w") + v[1:]
        return self.rename(mapping)

    # -- comparison and output ----------------------------------------------

    def mismatches(self, other: MultiSeries, upto: int | None = None) -> list[tuple[Exps, Fraction, Fraction]]:
        """Coefficient-wise differences up to total degree ``upto`` (default: cap)."""
        self._check(other)
        upto = self.cap if upto is None else upto
        keys = set(self._coeffs) | set(other._coeffs)
        out = []
        for k in sorted(keys, key=lambda e: (sum(e), e)):
            if sum(k) > upto:
                continue
            a, b = self.coefficient(k), other.coefficient(k)
            if a != b:
                out.append((k, a, b))
        return out

    def format_exps(self, exps: Exps) -> str:
        parts = [f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, exps) if e]
        return "*".join(parts) or "1"

    def to_json(self) -> list[dict]:
        return [
            {"exps": {v: e for v, e in zip(self.vars, k) if e}, "coeff": str(c)}
            for k, c in sorted(self._coeffs.items())
        ]

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"0 + O(deg {self.cap + 1})"
        def term(k, c):
            if not any(k):
                return str(c)
            mono = self.format_exps(k)
            return mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}"

        body = " + ".join(term(k, c) for k, c in sorted(self._coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])))
        return f"{body} + O(deg {self.cap + 1})".replace("+ -", "- ")


def _geometric_sum(x: MultiSeries) -> MultiSeries:
    """sum_{k>=0} x^k for x without constant term."""
    total = MultiSeries.constant(x.vars, x.cap, 1)
    power = total
    for _ in range(x.cap):
        power = power * x
        if power.is_zero():
            break
        total = total + power
    return total


def series_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a * b


def series_add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a + b


def series_scale(a: MultiSeries, q: Scalar) -> MultiSeries:
    return a.scale(q)


def series_div(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a / b


def series_exp(a: MultiSeries) -> MultiSeries:
    return a.exp()


def series_log(a: MultiSeries) -> MultiSeries:
    return a.log()


def series_pow(base: MultiSeries, exponent: Scalar) -> MultiSeries:
    return base.power(exponent)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def coherent_vars(alg: LieAlgebraSpec | str) -> tuple[str, ...]:
    name = alg if isinstance(alg, str) else alg.name
    try:
        return COHERENT_VARS[name]
    except KeyError:
        raise SeriesError(f"no coherent-state variables for algebra {name!r}") from None


def _algebra_name(alg: LieAlgebraSpec | str) -> str:
    name = alg if isinstance(alg, str) else alg.name
    builtin(name)  # validates
    return name


class _Vars:
    """Shorthand for building closed forms in a fixed variable set."""

    def __init__(self, vars: tuple[str, ...], cap: int):
        self.vars, self.cap = vars, cap
        for v in vars:
            setattr(self, v, MultiSeries.variable(vars, cap, v))

    def const(self, q: Scalar) -> MultiSeries:
        return MultiSeries.constant(self.vars, self.cap, q)


def closed_form_leibniz(alg: LieAlgebraSpec | str, params: Params, cap: int = DEFAULT_CAP) -> MultiSeries:
    name = _algebra_name(alg)
    x = _Vars(coherent_vars(name), cap)
    m, c = params.m, params.c
    if name == "hw":
        return (x.w1 * x.v1).scale(m).exp()
    if name == "sl2":
        return (1 - x.w1 * x.v1).power(-c)
    u = 1 - x.w1 * x.v1
    quad = x.w1 * x.v2 * x.v2 + 2 * x.w2 * x.v2 + x.w2 * x.w2 * x.v1
    return u.power(-c) * (quad / u).scale(m / 2).exp()


def _berezin_forms(name: str, params: Params, cap: int) -> dict[str, Callable[[], MultiSeries]]:
    x = _Vars(coherent_vars(name), cap)
    m, c = params.m, params.c
    half = Fraction(1, 2)
    if name == "hw":
        return {
            "X": lambda: x.w1.scale(m),
            "P": lambda: x.v1.scale(m),
            "H": lambda: x.const(m),
            "X1": lambda: (x.w1 + x.v1).scale(m),
        }
    u = 1 - x.w1 * x.v1
    if name == "sl2":
        return {
            "R": lambda: (x.w1 / u).scale(c),
            "L": lambda: (x.v1 / u).scale(c),
            "rho": lambda: ((1 + x.w1 * x.v1) / u).scale(c),
            "X2": lambda: ((1 + x.w1) * (1 + x.v1) / u).scale(c),
        }
    a = x.w2 * x.v1 + x.v2  # u * <P_x> / m
    b = x.w2 + x.w1 * x.v2  # u * <G> / m
    return {
        "M": lambda: x.const(m),
        "P_t": lambda: (x.v1 / u).scale(c) + ((a / u) ** 2).scale(m / 2),
        "P_x": lambda: (a / u).scale(m),
        "K": lambda: (x.w1 / u).scale(c) + ((b / u) ** 2).scale(m / 2),
        "G": lambda: (b / u).scale(m),
        "D": lambda: ((1 + x.w1 * x.v1) / u).scale(c) + (a * b / (u * u)).scale(m),
        "X1": lambda: ((1 + x.w1) * (1 + x.v1) / u).scale(c) + (((a + b) / u) ** 2).scale(m / 2),
        # As printed: m instead of m/2 on the quadratic part, which is not <P_t> + <D> + <K>.
        "X1_printed": lambda: ((1 + x.w1) * (1 + x.v1) / u).scale(c) + (((a + b) / u) ** 2).scale(m),
        "X2": lambda: ((a + b) / u).scale(m),
        "L0": lambda: (x.v1 / u).scale(c - half),
        "R0": lambda: (x.w1 / u).scale(c - half),
        "rho0": lambda: ((1 + x.w1 * x.v1) / u).scale(c - half),
    }


def berezin_form_names(alg: LieAlgebraSpec | str) -> list[str]:
    name = _algebra_name(alg)
    return list(_berezin_forms(name, Params(1, 1), 0))


def closed_form_berezin(op: str, alg: LieAlgebraSpec | str, params: Params, cap: int = DEFAULT_CAP) -> MultiSeries:
    name = _algebra_name(alg)
    forms = _berezin_forms(name, params, cap)
    if op not in forms:
        raise SeriesError(f"no closed Berezin form {op!r} for {name}; available: {sorted(forms)}")
    return forms[op]()
