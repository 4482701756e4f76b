"""Exact-rational checks of Berezin quantization for the Heisenberg-Weyl, sl(2)
and Schrodinger algebras."""

from .algebra import (
    DEFAULT_GRID,
    AlgebraError,
    EnvElement,
    LieAlgebraSpec,
    Params,
    bracket,
    builtin,
    parse_rational,
    pbw_normalize,
    verify_jacobi,
)
from .berezin import berezin_from_fock, leibniz_from_fock, observable
from .fock import FockVector, TruncationError, TruncationPolicy, apply, gram, gram_matrix, moments
from .series import MultiSeries, SeriesError, closed_form_berezin, closed_form_leibniz
from .weyl import HatMap, IdentityError, WeylError, WeylPoly, hat_rep, weyl_commutator, weyl_mul

__all__ = [
    "DEFAULT_GRID",
    "AlgebraError",
    "EnvElement",
    "FockVector",
    "HatMap",
    "IdentityError",
    "LieAlgebraSpec",
    "MultiSeries",
    "Params",
    "SeriesError",
    "TruncationError",
    "TruncationPolicy",
    "WeylError",
    "WeylPoly",
    "apply",
    "berezin_from_fock",
    "bracket",
    "builtin",
    "closed_form_berezin",
    "closed_form_leibniz",
    "gram",
    "gram_matrix",
    "hat_rep",
    "leibniz_from_fock",
    "moments",
    "observable",
    "parse_rational",
    "pbw_normalize",
    "verify_jacobi",
    "weyl_commutator",
    "weyl_mul",
]
