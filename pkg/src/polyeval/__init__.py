"""Certified approximate polynomial arithmetic on dyadic numbers.

Fast multipoint evaluation to a guaranteed absolute precision ``2**-L`` and three
applications built on it: batch real-root refinement, interpolation and Taylor
shift.  Brute-force references live in :mod:`polyeval.oracle`.
"""

from .dyadic import Dyadic, DyadicComplex
from .errors import (
    CoincidentPoints,
    DegenerateDivisor,
    EvaluationUndecidable,
    InsufficientInputPrecision,
    NotMonic,
    ParseError,
    PolyEvalError,
    PrecisionExhausted,
    ZeroDivisor,
)
from .poly import EXACT, ApproxPoly, GaussianIntPoly, norm_bits, one_norm_bound, trunc_poly
from .mul import approx_mul, exact_mul, kronecker_pack, kronecker_unpack
from .div import RootBound, div_monic, div_normalized, divrem_kernel, series_inverse
from .mpeval import (
    EvalStats,
    PrecisionBudget,
    SubproductTree,
    build_subproduct_tree,
    multipoint_eval,
    remainder_layer,
    schedule_precisions,
)
from .interp import InterpProblem, combine_layer, interpolate, lagrange_denominators
from .taylor import ShiftProblem, taylor_shift, unit_circle_points
from .refine import (IsolatingInterval, RefineJob, RefineStats, certified_sign, qir_step,
                     refine_batch, refine_sequential)

__version__ = "0.1.0"

__all__ = [
    "Dyadic", "DyadicComplex", "ApproxPoly", "GaussianIntPoly", "EXACT",
    "norm_bits", "one_norm_bound", "trunc_poly",
    "approx_mul", "exact_mul", "kronecker_pack", "kronecker_unpack",
    "RootBound", "div_monic", "div_normalized", "divrem_kernel", "series_inverse",
    "EvalStats", "PrecisionBudget", "SubproductTree", "build_subproduct_tree",
    "multipoint_eval", "remainder_layer", "schedule_precisions",
    "InterpProblem", "combine_layer", "interpolate", "lagrange_denominators",
    "ShiftProblem", "taylor_shift", "unit_circle_points",
    "IsolatingInterval", "RefineJob", "RefineStats", "certified_sign", "qir_step",
    "refine_batch", "refine_sequential",
    "PolyEvalError", "InsufficientInputPrecision", "PrecisionExhausted", "DegenerateDivisor",
    "NotMonic", "CoincidentPoints", "ZeroDivisor", "EvaluationUndecidable", "ParseError",
]
