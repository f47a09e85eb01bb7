"""Exact EKL forms, local A1-degrees and arithmetic Milnor numbers."""

from .degree import (
    ClosedPoint,
    FiberReport,
    bifurcation_obstruction,
    conservation_check,
    fiber_sum,
    fiber_sum_univariate,
    local_degree_etale,
    milnor_number,
    node_arithmetic_type,
)
from .ekl import EKLComputation, ekl_class, ekl_computation
from .exceptions import (
    EKLDegError,
    InputError,
    InternalError,
    MathPreconditionError,
    NotIsolatedZeroError,
    ParseError,
)
from .fields import FieldContext, FieldElement, SquareClass, hilbert_symbol, reduce_square_class
from .gw import GWClass, SymmetricForm, equals, invariants, present, stable_equals
from .poly import Polynomial, parse_polynomial
from .standard_basis import LocalAlgebra, standard_basis

__all__ = [
    "FieldContext",
    "FieldElement",
    "SquareClass",
    "hilbert_symbol",
    "reduce_square_class",
    "Polynomial",
    "parse_polynomial",
    "LocalAlgebra",
    "standard_basis",
    "EKLComputation",
    "ekl_class",
    "ekl_computation",
    "SymmetricForm",
    "GWClass",
    "invariants",
    "equals",
    "stable_equals",
    "present",
    "ClosedPoint",
    "FiberReport",
    "milnor_number",
    "local_degree_etale",
    "node_arithmetic_type",
    "fiber_sum",
    "fiber_sum_univariate",
    "conservation_check",
    "bifurcation_obstruction",
    "EKLDegError",
    "InputError",
    "MathPreconditionError",
    "InternalError",
    "NotIsolatedZeroError",
    "ParseError",
]
__version__ = "0.1.0"
