"""Documented single-term corruptions and the suite each one must trip.

Each mutation runs one suite on a corrupted input and names the item that
must show up among the failures; the unmutated run of the same suite is the
control.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import DEFAULT_GRID, Params, builtin, verify_jacobi
from .berezin import check_defining_pdes, defining_pdes, DefiningPDE
from .theorems import check_decoupling, check_self_adjointness
from .weyl import check_homomorphism, hat_rep, WeylPoly


@dataclass(frozen=True)
class Mutation:
    name: str
    suite: str
    description: str
    locus: str
    run: Callable[[], list]
    control: Callable[[], list]


def _failing_items(reports: list) -> list[str]:
    items = []
    for r in reports:
        if r.passed:
            continue
        if hasattr(r, "checks"):
            items += [f"{c.description}: {c.residual}" for c in r.failures]
        else:
            items += [f"{r.subject} @ {at}: {a} vs {b}" for at, a, b in r.mismatches]
    return items


def _corrupted_bracket() -> list:
    alg = builtin("schrodinger").with_bracket("D", "K", {"K": 3})
    return [verify_jacobi(alg)]


def _dropped_hat_term(params: Params) -> list:
    h = hat_rep("schrodinger", params)
    R1, V1 = WeylPoly.raising(2, 1), WeylPoly.lowering(2, 1)
    bad = h.replace(D=WeylPoly.const(2, params.c) + 2 * R1 * V1)
    return [check_homomorphism(bad)]


def _wrong_pde_coefficient(params: Params) -> list:
    pdes = defining_pdes("schrodinger", params)
    first = pdes[0]
    terms = tuple(
        (coeff + 1, mono, deriv) if mono == (("v1", 1),) and deriv is None else (coeff, mono, deriv)
        for coeff, mono, deriv in first.terms
    )
    return check_defining_pdes("schrodinger", params, 6, [DefiningPDE(first.name, first.wrt, terms), *pdes[1:]])


WRONG_ADJOINT = {"K": "P_x", "G": "P_t"}


def mutations(params: Params = DEFAULT_GRID[1]) -> list[Mutation]:
    """The catalogue, evaluated at ``params`` (default (3/2, 5/7), where m != c)."""
    return [
        Mutation(
            "corrupted-bracket",
            "jacobi",
            "[D, K] = 3K instead of 2K",
            "jacobi(K, D, P_t)",
            _corrupted_bracket,
            lambda: [verify_jacobi(builtin("schrodinger"))],
        ),
        Mutation(
            "dropped-hat-term",
            "homomorphism",
            "D^ without its R2 V2 term",
            "[G^, D^]",
            lambda: _dropped_hat_term(params),
            lambda: [check_homomorphism(hat_rep("schrodinger", params))],
        ),
        Mutation(
            "wrong-adjoint",
            "selfadjoint",
            "inner product built with K* = P_x and G* = P_t",
            "Upsilon is w<->v symmetric",
            lambda: [check_self_adjointness(4, params, WRONG_ADJOINT, algebras=("schrodinger",))],
            lambda: [check_self_adjointness(4, params, algebras=("schrodinger",))],
        ),
        Mutation(
            "missing-half-shift",
            "decoupling",
            "rho0 = D - G P_x / m without the -1/2",
            "[L0, R0] = rho0",
            lambda: [check_decoupling(params, 4, rho0_shift=Fraction(0))],
            lambda: [check_decoupling(params, 4)],
        ),
        Mutation(
            "wrong-pde-coefficient",
            "pdes",
            "(c + 1) v1 Upsilon in the w1 equation",
            "pde:schrodinger:dw1 @ v1",
            lambda: _wrong_pde_coefficient(params),
            lambda: check_defining_pdes("schrodinger", params, 6),
        ),
        Mutation(
            "hw-sign-flip",
            "homomorphism",
            "P^ = -m V in the m-HW algebra",
            "[X^, P^]",
            lambda: [check_homomorphism(hat_rep("hw", params).replace(P=WeylPoly.lowering(1, 1) * -params.m))],
            lambda: [check_homomorphism(hat_rep("hw", params))],
        ),
    ]


def failing_items(reports: list) -> list[str]:
    return _failing_items(reports)
