"""Report records shared by the verification suites.

Every report serializes to a plain JSON-able dict with a ``pass`` key; the
CLI aggregates them and derives its exit status from those keys alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class Check:
    description: str
    passed: bool
    residual: str | None = None

    def to_json(self) -> dict:
        return {"description": self.description, "pass": self.passed, "residual": self.residual}


@dataclass(frozen=True)
class Report:
    """Flat list of named checks, e.g. one per Jacobi triple or bracket pair."""

    subject: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "kind": "report",
            "subject": self.subject,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


Mismatch = tuple[Any, Fraction, Fraction]


@dataclass(frozen=True)
class ComparisonReport:
    """Coefficient-wise comparison of two independently produced series."""

    subject: str
    lhs_source: str
    rhs_source: str
    cap: int
    params: dict
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "kind": "comparison",
            "subject": self.subject,
            "pass": self.passed,
            "cap": self.cap,
            "params": self.params,
            "lhs_source": self.lhs_source,
            "rhs_source": self.rhs_source,
            "mismatches": [
                {"at": _label(at), "lhs": str(lhs), "rhs": str(rhs)} for at, lhs, rhs in self.mismatches
            ],
        }


@dataclass(frozen=True)
class DiscrepancyReport:
    """A printed formula known to disagree with its self-consistent reading.

    ``predicted_mismatch`` states whether, at these parameters, analysis says
    the printed and the consistent readings should differ; the report passes
    when observation agrees with that prediction.
    """

    subject: str
    note: str
    cap: int
    params: dict
    predicted_mismatch: bool
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def observed_mismatch(self) -> bool:
        return bool(self.mismatches)

    @property
    def first_mismatch(self) -> Mismatch | None:
        return self.mismatches[0] if self.mismatches else None

    @property
    def passed(self) -> bool:
        return self.observed_mismatch == self.predicted_mismatch

    def to_json(self) -> dict:
        first = self.first_mismatch
        return {
            "kind": "known-discrepancy",
            "flag": "known-discrepancy",
            "subject": self.subject,
            "pass": self.passed,
            "cap": self.cap,
            "params": self.params,
            "note": self.note,
            "predicted_mismatch": self.predicted_mismatch,
            "mismatch_count": len(self.mismatches),
            "first_mismatch": None
            if first is None
            else {"at": _label(first[0]), "printed": str(first[1]), "consistent": str(first[2])},
        }


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    checks: list[Check]
    params: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "kind": "theorem",
            "theorem": self.theorem,
            "pass": self.passed,
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
        }


def _label(at: Any) -> Any:
    if isinstance(at, tuple):
        return [_label(a) for a in at]
    if isinstance(at, Fraction):
        return str(at)
    return at
