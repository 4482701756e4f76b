"""Lie algebras by structure constants and their enveloping algebras.

Elements of the universal enveloping algebra are rational combinations of
generator words.  ``pbw_normalize`` rewrites them into the PBW basis of
nondecreasing words with respect to the basis order of the algebra, using
``xy -> yx + [x, y]`` on the leftmost inversion until none remain.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .reports import Check, Report

Word = tuple[str, ...]
Scalar = int | Fraction


class AlgebraError(ValueError):
    pass


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or an integer; floats are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise AlgebraError(f"expected a rational as 'p/q', got {text!r}")
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise AlgebraError(f"invalid rational {text!r}; use integers or 'p/q'")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise AlgebraError(f"invalid rational {text!r}; use integers or 'p/q'") from None


@dataclass(frozen=True)
class Params:
    """Representation parameters: m is the mass/central value, c the vacuum weight."""

    m: Fraction = Fraction(1)
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "m", parse_rational(self.m))
        object.__setattr__(self, "c", parse_rational(self.c))

    def to_json(self) -> dict:
        return {"m": str(self.m), "c": str(self.c)}

    def __str__(self) -> str:
        return f"(m={self.m}, c={self.c})"


DEFAULT_GRID = (
    Params(Fraction(1), Fraction(1)),
    Params(Fraction(3, 2), Fraction(5, 7)),
    Params(Fraction(2), Fraction(1, 2)),
)


class EnvElement:
    """Rational linear combination of generator words (not normalized)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        store: dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            store[word] = store.get(word, Fraction(0)) + Fraction(coeff)
        self._terms = MappingProxyType({w: c for w, c in store.items() if c})

    @classmethod
    def gen(cls, name: str) -> EnvElement:
        return cls({(name,): 1})

    @classmethod
    def scalar(cls, q: Scalar) -> EnvElement:
        return cls({(): q})

    @classmethod
    def word(cls, *names: str, coeff: Scalar = 1) -> EnvElement:
        return cls({tuple(names): coeff})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return self._terms

    def generators(self) -> set[str]:
        return {g for w in self._terms for g in w}

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> EnvElement:
        if isinstance(other, EnvElement):
            return other
        if isinstance(other, (int, Fraction)):
            return EnvElement.scalar(other)
        return NotImplemented

    def __add__(self, other) -> EnvElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return EnvElement(out)

    __radd__ = __add__

    def __neg__(self) -> EnvElement:
        return EnvElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> EnvElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> EnvElement:
        return (-self) + other

    def __mul__(self, other) -> EnvElement:
        if isinstance(other, (int, Fraction)):
            return EnvElement({w: c * other for w, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Word, Fraction] = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                out[wa + wb] = out.get(wa + wb, 0) + ca * cb
        return EnvElement(out)

    def __rmul__(self, other) -> EnvElement:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, q: Scalar) -> EnvElement:
        return self * (Fraction(1) / Fraction(q))

    def __pow__(self, k: int) -> EnvElement:
        out = EnvElement.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "word": list(w)} for w, c in sorted(self._terms.items())]

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(w)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _as_element(value) -> EnvElement:
    if isinstance(value, EnvElement):
        return value
    if isinstance(value, Mapping):
        # {generator: coeff} shorthand for degree-one results
        return EnvElement({((k,) if k else ()): v for k, v in value.items()})
    if isinstance(value, (int, Fraction)):
        return EnvElement.scalar(value)
    if isinstance(value, str):
        return EnvElement.gen(value)
    raise AlgebraError(f"cannot interpret bracket value {value!r}")


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Finite-dimensional Lie algebra with rational structure constants.

    ``structure`` holds ``[x, y]`` for every ordered pair of distinct basis
    names with a nonzero bracket; missing pairs bracket to zero.
    """

    name: str
    basis: tuple[str, ...]
    structure: Mapping[tuple[str, str], EnvElement]
    central: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_brackets(
        cls,
        name: str,
        basis: Iterable[str],
        brackets: Mapping[tuple[str, str], object],
        central: Iterable[str] = (),
    ) -> LieAlgebraSpec:
        """Build the algebra, filling in ``[y, x] = -[x, y]`` for pairs given one way."""
        basis = tuple(basis)
        if len(set(basis)) != len(basis):
            raise AlgebraError(f"repeated generator in basis {basis}")
        table: dict[tuple[str, str], EnvElement] = {}
        for (x, y), value in brackets.items():
            elem = _as_element(value)
            for g in (x, y, *elem.generators()):
                if g not in basis:
                    raise AlgebraError(f"generator {g!r} in bracket [{x}, {y}] is not in basis {basis}")
            if elem.degree() > 1:
                raise AlgebraError(f"bracket [{x}, {y}] = {elem} has degree > 1")
            if x == y:
                if not elem.is_zero():
                    raise AlgebraError(f"[{x}, {x}] must vanish, got {elem}")
                continue
            for key, val in (((x, y), elem), ((y, x), -elem)):
                if key in table and table[key] != val:
                    raise AlgebraError(f"bracket table is not antisymmetric at [{key[0]}, {key[1]}]")
                table[key] = val
        table = {k: v for k, v in table.items() if not v.is_zero()}
        central = frozenset(central)
        if not central <= set(basis):
            raise AlgebraError(f"central generators {sorted(central - set(basis))} not in basis")
        return cls(name, basis, MappingProxyType(table), central)

    def __hash__(self) -> int:
        return hash((self.name, self.basis, frozenset(self.structure.items()), self.central))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebraSpec):
            return NotImplemented
        return (self.name, self.basis, dict(self.structure), self.central) == (
            other.name,
            other.basis,
            dict(other.structure),
            other.central,
        )

    def rank(self, g: str) -> int:
        try:
            return self.basis.index(g)
        except ValueError:
            raise AlgebraError(f"generator {g!r} is not in the basis of {self.name}: {self.basis}") from None

    def structure_of(self, x: str, y: str) -> EnvElement:
        """The table entry ``[x, y]``."""
        self.rank(x), self.rank(y)
        return self.structure.get((x, y), EnvElement())

    def gen(self, name: str) -> EnvElement:
        self.rank(name)
        return EnvElement.gen(name)

    def with_bracket(self, x: str, y: str, value) -> LieAlgebraSpec:
        """Copy of this algebra with ``[x, y]`` (and ``[y, x]``) replaced."""
        table = {k: v for k, v in self.structure.items() if k not in ((x, y), (y, x))}
        table[(x, y)] = _as_element(value)
        return LieAlgebraSpec.from_brackets(self.name, self.basis, table, self.central)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        brackets = []
        for i, x in enumerate(self.basis):
            for y in self.basis[i + 1 :]:
                elem = self.structure_of(x, y)
                if not elem.is_zero():
                    brackets.append({"i": x, "j": y, "result": elem.to_json()})
        return {
            "name": self.name,
            "basis": list(self.basis),
            "central": sorted(self.central, key=self.rank),
            "brackets": brackets,
        }

    @classmethod
    def from_json(cls, doc: Mapping | str) -> LieAlgebraSpec:
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            name, basis = doc["name"], list(doc["basis"])
            entries = doc.get("brackets", [])
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra document: missing {exc}") from None

        def resolve(ix):
            if isinstance(ix, int) and not isinstance(ix, bool):
                if not 0 <= ix < len(basis):
                    raise AlgebraError(f"bracket index {ix} out of range for basis {basis}")
                return basis[ix]
            return ix

        brackets = {}
        for entry in entries:
            x, y = resolve(entry["i"]), resolve(entry["j"])
            terms = {tuple(t["word"]): parse_rational(t["coeff"]) for t in entry["result"]}
            brackets[(x, y)] = EnvElement(terms)
        return cls.from_brackets(name, basis, brackets, doc.get("central", ()))


# ---------------------------------------------------------------------------
# Built-in algebras
# ---------------------------------------------------------------------------


def _schrodinger() -> LieAlgebraSpec:
    # rows of the multiplication table, [row, column]
    table = {
        ("K", "D"): {"K": -2},
        ("K", "P_x"): {"G": -1},
        ("K", "P_t"): {"D": -1},
        ("G", "D"): {"G": -1},
        ("G", "P_x"): {"M": -1},
        ("G", "P_t"): {"P_x": -1},
        ("D", "P_x"): {"P_x": -1},
        ("D", "P_t"): {"P_t": -2},
    }
    return LieAlgebraSpec.from_brackets(
        "schrodinger", ("M", "K", "G", "D", "P_x", "P_t"), table, central={"M"}
    )


def _hw() -> LieAlgebraSpec:
    return LieAlgebraSpec.from_brackets("hw", ("H", "X", "P"), {("P", "X"): {"H": 1}}, central={"H"})


def _sl2() -> LieAlgebraSpec:
    table = {
        ("L", "R"): {"rho": 1},
        ("rho", "R"): {"R": 2},
        ("L", "rho"): {"L": 2},
    }
    return LieAlgebraSpec.from_brackets("sl2", ("rho", "R", "L"), table)


_BUILDERS = {"hw": _hw, "sl2": _sl2, "schrodinger": _schrodinger}
BUILTIN_NAMES = tuple(_BUILDERS)


def builtin(name: str) -> LieAlgebraSpec:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise AlgebraError(f"unknown algebra {name!r}; known algebras: {', '.join(BUILTIN_NAMES)}") from None


def is_builtin(alg: LieAlgebraSpec) -> bool:
    return alg.name in _BUILDERS and alg == builtin(alg.name)


# ---------------------------------------------------------------------------
# Enveloping-algebra arithmetic
# ---------------------------------------------------------------------------


def _check_generators(e: EnvElement, alg: LieAlgebraSpec) -> None:
    for g in e.generators():
        alg.rank(g)


def pbw_normalize(e: EnvElement, alg: LieAlgebraSpec) -> EnvElement:
    _check_generators(e, alg)
    rank = {g: i for i, g in enumerate(alg.basis)}
    done: dict[Word, Fraction] = {}
    pending: dict[Word, Fraction] = dict(e.terms)
    while pending:
        word, coeff = pending.popitem()
        if not coeff:
            continue
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            if rank[x] > rank[y]:
                head, tail = word[:i], word[i + 2 :]
                swapped = head + (y, x) + tail
                pending[swapped] = pending.get(swapped, 0) + coeff
                for w, c in alg.structure_of(x, y).terms.items():
                    new = head + w + tail
                    pending[new] = pending.get(new, 0) + coeff * c
                break
        else:
            done[word] = done.get(word, 0) + coeff
    return EnvElement(done)


def bracket(a: EnvElement | str, b: EnvElement | str, alg: LieAlgebraSpec) -> EnvElement:
    a = alg.gen(a) if isinstance(a, str) else a
    b = alg.gen(b) if isinstance(b, str) else b
    _check_generators(a, alg)
    _check_generators(b, alg)
    return pbw_normalize(a * b - b * a, alg)


def verify_jacobi(alg: LieAlgebraSpec) -> Report:
    checks = []
    for x, y, z in itertools.combinations(alg.basis, 3):
        residual = (
            bracket(bracket(x, y, alg), z, alg)
            + bracket(bracket(y, z, alg), x, alg)
            + bracket(bracket(z, x, alg), y, alg)
        )
        residual = pbw_normalize(residual, alg)
        checks.append(Check(f"jacobi({x}, {y}, {z})", residual.is_zero(), None if residual.is_zero() else str(residual)))
    return Report(f"jacobi:{alg.name}", checks)
