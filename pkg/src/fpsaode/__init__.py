"""Formal power series solutions of algebraic ODEs via generalized separants.

Coefficient tuples use the derivative convention: ``c_j = y^(j)(0)``, so the
series is ``sum c_j x^j / j!``.
"""

from .arith import GaussianField, GaussianRational, ParamField, RationalField, make_field
from .diffpoly import DiffPoly, gen_separant, remainder, separant, separant_matrix
from .errors import AodeError
from .jets import jet_ideal, rq_values
from .parser import parse_constant, parse_diffpoly, parse_poly
from .poly import MultiPoly, PolyRing, contains_one, groebner_basis
from .solver import (
    SolutionDescription,
    VanishingOrderReport,
    direct_method_local,
    extend_global,
    global_vanishing_order,
    ift_extend,
    local_vanishing_order,
    solve,
    verify_truncation,
)

__version__ = "0.1.0"

__all__ = [
    "AodeError",
    "DiffPoly",
    "GaussianField",
    "GaussianRational",
    "MultiPoly",
    "ParamField",
    "PolyRing",
    "RationalField",
    "SolutionDescription",
    "VanishingOrderReport",
    "contains_one",
    "direct_method_local",
    "extend_global",
    "gen_separant",
    "global_vanishing_order",
    "groebner_basis",
    "ift_extend",
    "jet_ideal",
    "local_vanishing_order",
    "make_field",
    "parse_constant",
    "parse_diffpoly",
    "parse_poly",
    "remainder",
    "rq_values",
    "separant",
    "separant_matrix",
    "solve",
    "verify_truncation",
]
