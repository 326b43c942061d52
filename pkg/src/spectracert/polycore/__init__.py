"""Exact polynomial arithmetic: rationals, sparse multivariate and dense univariate polynomials."""

from .linear import LinearForm, Substitution, apply_substitution
from .multipoly import MultiPoly, as_point, exact_divide, registry_from_json, registry_to_json
from .rational import Number, as_rational, format_rational, parse_rational
from .registry import MAX_EXP, RegistryMismatch, Var, VarRegistry
from .univariate import (
    IsolatingInterval,
    UniPoly,
    isolate_real_roots,
    poly_gcd,
    real_root_count,
    real_root_total,
    square_free_decomposition,
    square_free_part,
    sturm_chain,
)

__all__ = [
    "IsolatingInterval",
    "LinearForm",
    "MAX_EXP",
    "MultiPoly",
    "Number",
    "RegistryMismatch",
    "Substitution",
    "UniPoly",
    "Var",
    "VarRegistry",
    "apply_substitution",
    "as_point",
    "as_rational",
    "exact_divide",
    "format_rational",
    "isolate_real_roots",
    "parse_rational",
    "poly_gcd",
    "real_root_count",
    "real_root_total",
    "registry_from_json",
    "registry_to_json",
    "square_free_decomposition",
    "square_free_part",
    "sturm_chain",
]
