"""Truncated Fock space of the built-in algebras.

Basis states ``|k_1, ..., k_n>`` are raising-generator monomials applied to
the vacuum.  Weyl polynomials act through the combinatorial ladder rules
(``R_j`` raises index j, ``V_j`` multiplies by ``k_j`` and lowers it), and the
inner product is the one making each raising generator adjoint to its
lowering partner, computed by pushing the adjoint word onto the ket and
reading off the vacuum coefficient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import perm
from types import MappingProxyType
from typing import Mapping, Sequence

from .algebra import AlgebraError, EnvElement, LieAlgebraSpec, Params, bracket, builtin
from .reports import Check, Report
from .weyl import HatMap, WeylPoly, hat_rep

Index = tuple[int, ...]

RAISING = {"hw": ("X",), "sl2": ("R",), "schrodinger": ("K", "G")}
ADJOINT = {
    "hw": {"X": "P"},
    "sl2": {"R": "L"},
    "schrodinger": {"K": "P_t", "G": "P_x"},
}


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class FockVector:
    n: int
    entries: Mapping[Index, Fraction] = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for k, v in self.entries.items():
            k = tuple(k)
            if len(k) != self.n or any(x < 0 for x in k):
                raise ValueError(f"bad multi-index {k} for {self.n} pairs")
            if v:
                clean[k] = Fraction(v)
        object.__setattr__(self, "entries", MappingProxyType(clean))

    @classmethod
    def vacuum(cls, n: int) -> FockVector:
        return cls(n, {(0,) * n: 1})

    @classmethod
    def basis(cls, index: Sequence[int]) -> FockVector:
        index = tuple(index)
        return cls(len(index), {index: 1})

    def degree(self) -> int:
        return max((sum(k) for k in self.entries), default=0)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: FockVector) -> FockVector:
        if other.n != self.n:
            raise ValueError("pair count mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return FockVector(self.n, out, self.truncated or other.truncated)

    def __sub__(self, other: FockVector) -> FockVector:
        return self + other.scale(-1)

    def scale(self, q) -> FockVector:
        return FockVector(self.n, {k: v * q for k, v in self.entries.items()}, self.truncated)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.n == other.n and dict(self.entries) == dict(other.entries)

    def to_json(self) -> list[dict]:
        return [{"index": list(k), "coeff": str(v)} for k, v in sorted(self.entries.items())]


@dataclass(frozen=True)
class TruncationPolicy:
    """Keep components of total degree <= max_degree.

    Identities are trusted only on inputs of degree <= max_degree - margin,
    where the margin bounds the degree raise of the operators involved.
    """

    max_degree: int
    margin: int = 0

    def __post_init__(self):
        if self.max_degree < 0 or self.margin < 0:
            raise ValueError("truncation degrees must be nonnegative")

    @property
    def safe_degree(self) -> int:
        return self.max_degree - self.margin


def apply(p: WeylPoly, v: FockVector, t: TruncationPolicy | None = None) -> FockVector:
    if p.n != v.n:
        raise ValueError(f"pair count mismatch: operator has {p.n}, vector has {v.n}")
    out: dict[Index, Fraction] = {}
    truncated = v.truncated
    for k, q in v.entries.items():
        for (a, b), c in p.terms.items():
            if any(ki < bi for ki, bi in zip(k, b)):
                continue
            coeff = c * q
            for ki, bi in zip(k, b):
                coeff *= perm(ki, bi)
            new = tuple(ki - bi + ai for ki, ai, bi in zip(k, a, b))
            if t is not None and sum(new) > t.max_degree:
                truncated = True
                continue
            out[new] = out.get(new, 0) + coeff
    return FockVector(v.n, out, truncated)


def vacuum_component(v: FockVector) -> Fraction:
    return v.entries.get((0,) * v.n, Fraction(0))


def indices_up_to(n: int, max_degree: int) -> list[Index]:
    """Multi-indices of total degree <= max_degree, graded then reverse-lex."""
    out = []
    for d in range(max_degree + 1):
        out.extend(sorted((k for k in itertools.product(range(d + 1), repeat=n) if sum(k) == d), reverse=True))
    return out


def _algebra(alg: LieAlgebraSpec | str) -> LieAlgebraSpec:
    alg = builtin(alg) if isinstance(alg, str) else alg
    if alg.name not in RAISING:
        raise AlgebraError(f"no Fock realization for algebra {alg.name!r}")
    return alg


class FockModel:
    """Inner-product machinery for one algebra, parameter point and adjoint pairing.

    ``adjoint`` maps each raising generator to the generator used as its
    adjoint; overriding it is how wrong pairings are probed.
    """

    def __init__(self, alg: LieAlgebraSpec | str, params: Params, adjoint: Mapping[str, str] | None = None):
        self.alg = _algebra(alg)
        self.params = params
        self.hat: HatMap = hat_rep(self.alg, params)
        self.raising = RAISING[self.alg.name]
        self.adjoint = dict(adjoint or ADJOINT[self.alg.name])
        self.n = len(self.raising)
        for i, r in enumerate(self.raising, start=1):
            assert self.hat(r) == WeylPoly.raising(self.n, i)
        self.lowering_ops = [self.hat(self.adjoint[r]) for r in self.raising]
        self._strictly_lowering = all(
            sum(a) < sum(b) for op in self.lowering_ops for (a, b) in op.terms
        )
        self._lowered: dict[tuple[Index, Index], FockVector] = {}
        self._gram: dict[tuple[Index, Index], Fraction] = {}

    def lowered(self, alpha: Index, beta: Index) -> FockVector:
        """Adjoint of the raising word for ``alpha`` applied to ``|beta>``."""
        key = (alpha, beta)
        if key not in self._lowered:
            if not any(alpha):
                vec = FockVector.basis(beta)
            else:
                i = max(j for j, a in enumerate(alpha) if a)
                prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
                vec = apply(self.lowering_ops[i], self.lowered(prev, beta))
            self._lowered[key] = vec
        return self._lowered[key]

    def gram(self, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
        alpha, beta = tuple(alpha), tuple(beta)
        key = (alpha, beta)
        if key not in self._gram:
            if self._strictly_lowering and sum(alpha) > sum(beta):
                value = Fraction(0)
            else:
                value = vacuum_component(self.lowered(alpha, beta))
            self._gram[key] = value
        return self._gram[key]

    def inner(self, alpha: Sequence[int], psi: FockVector) -> Fraction:
        """<alpha|psi> in the Fock inner product."""
        alpha = tuple(alpha)
        return sum((v * self.gram(alpha, k) for k, v in psi.entries.items()), Fraction(0))

    def matrix_element(self, alpha: Sequence[int], op: WeylPoly, beta: Sequence[int]) -> Fraction:
        return self.inner(alpha, apply(op, FockVector.basis(tuple(beta))))

    def gram_matrix(self, max_degree: int) -> tuple[list[Index], list[list[Fraction]]]:
        idx = indices_up_to(self.n, max_degree)
        return idx, [[self.gram(a, b) for b in idx] for a in idx]


@lru_cache(maxsize=64)
def _cached_model(alg: LieAlgebraSpec, params: Params, adjoint: tuple | None) -> FockModel:
    return FockModel(alg, params, dict(adjoint) if adjoint else None)


def fock_model(alg: LieAlgebraSpec | str, params: Params, adjoint: Mapping[str, str] | None = None) -> FockModel:
    alg = _algebra(alg)
    return _cached_model(alg, params, tuple(sorted(adjoint.items())) if adjoint else None)


def gram(
    alg: LieAlgebraSpec | str,
    alpha: Sequence[int],
    beta: Sequence[int],
    params: Params,
    t: TruncationPolicy | None = None,
    adjoint: Mapping[str, str] | None = None,
) -> Fraction:
    need = max(sum(alpha), sum(beta))
    if t is not None and t.max_degree < need:
        raise TruncationError(f"truncation max_degree={t.max_degree} too small; need at least {need}")
    return fock_model(alg, params, adjoint).gram(alpha, beta)


def gram_matrix(
    alg: LieAlgebraSpec | str, max_degree: int, params: Params, adjoint: Mapping[str, str] | None = None
) -> tuple[list[Index], list[list[Fraction]]]:
    return fock_model(alg, params, adjoint).gram_matrix(max_degree)


def _hat_of(x: EnvElement | str, alg: LieAlgebraSpec, params: Params) -> WeylPoly:
    return hat_rep(alg, params)(x)


def moments(
    x: EnvElement | str,
    max_n: int,
    alg: LieAlgebraSpec | str,
    params: Params,
    t: TruncationPolicy | None = None,
) -> list[Fraction]:
    """Vacuum moments <Omega| x^k Omega> for k = 0..max_n."""
    alg = _algebra(alg)
    op = _hat_of(x, alg, params)
    need = max_n * max(op.degree_raise(), 0)
    if t is None:
        t = TruncationPolicy(need)
    elif t.max_degree < need:
        raise TruncationError(f"truncation max_degree={t.max_degree} too small for order {max_n}; need {need}")
    n = len(RAISING[alg.name])
    psi = FockVector.vacuum(n)
    out = [vacuum_component(psi)]
    for _ in range(max_n):
        psi = apply(op, psi, t)
        if psi.truncated:
            raise TruncationError("moment computation lost components to truncation")
        out.append(vacuum_component(psi))
    return out


def moment(
    x: EnvElement | str,
    n: int,
    alg: LieAlgebraSpec | str,
    params: Params,
    t: TruncationPolicy | None = None,
) -> Fraction:
    return moments(x, n, alg, params, t)[n]


def check_matrix_homomorphism(alg: LieAlgebraSpec | str, params: Params, max_degree: int = 5) -> Report:
    """Commutators of hat images, acting on basis vectors, realize the bracket table."""
    alg = _algebra(alg)
    h = hat_rep(alg, params)
    t = TruncationPolicy(max_degree, margin=2)
    n = len(RAISING[alg.name])
    checks = []
    for x, y in itertools.combinations(alg.basis, 2):
        hx, hy, hz = h(x), h(y), h(bracket(x, y, alg))
        bad = []
        for k in indices_up_to(n, t.safe_degree):
            e = FockVector.basis(k)
            lhs = apply(hx, apply(hy, e, t), t) - apply(hy, apply(hx, e, t), t)
            rhs = apply(hz, e, t)
            if lhs.truncated or rhs.truncated or lhs != rhs:
                bad.append(k)
        checks.append(Check(f"[{x}, {y}] on basis up to degree {t.safe_degree}", not bad, str(bad) if bad else None))
    return Report(f"matrix-homomorphism:{alg.name}{params}", checks)


# ---------------------------------------------------------------------------
# Exact positivity tests
# ---------------------------------------------------------------------------


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for j in range(col, n):
                    a[r][j] -= f * a[col][j]
    return det


def leading_principal_minors(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    return [determinant([row[:k] for row in matrix[:k]]) for k in range(1, len(matrix) + 1)]


def is_positive_semidefinite(matrix: Sequence[Sequence[Fraction]]) -> bool:
    """Exact test by symmetric elimination.

    A zero pivot is allowed only when its whole remaining row vanishes, which
    is necessary and sufficient for positive semidefiniteness.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
        return False
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True
