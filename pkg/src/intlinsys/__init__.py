"""Rigorous enclosures for interval linear systems.

The main entry points are :func:`magnitude_enclosure` and the classical
reference methods in :mod:`intlinsys.classic`.
"""

from .bounds import cheap_lower_bound_d, cheap_lower_bound_u
from .classic import (
    IterationResult,
    StoppingRule,
    gauss_seidel_step,
    gs_iterative,
    gs_limit,
    initial_box,
    iterate,
    krawczyk_limit,
    krawczyk_step,
    ning_kearfott_hull,
)
from .errors import (
    DegenerateBoundError,
    DegenerateHullError,
    DimensionError,
    DomainError,
    EmptyIntersectionError,
    GenerationExhaustedError,
    IntervalError,
    IntervalOverflowError,
    NonSquareError,
    NotCertifiedError,
    SingularMidpointError,
    VerificationFailedError,
)
from .interval import (
    Empty,
    Interval,
    IntervalMatrix,
    IntervalVector,
    comparison_matrix,
    contains,
    intersect,
    mag,
    matmul,
    matvec,
    mid,
    rad,
    subset,
)
from .linsys import (
    Form,
    IntervalLinearSystem,
    RegularityCertificate,
    approx_mid_inverse,
    certify_regular,
    precondition_relax,
    prepare,
)
from .magnitude import (
    OperatorInputs,
    gs_then_operator,
    magnitude_enclosure,
    magnitude_enclosure_gamma0,
    new_operator,
    new_operator_row,
)
from .verified import UDBounds, UDMode, UDSource, assemble_ud, verified_inverse_diag, verified_point_solve

__version__ = "0.1.0"

__all__ = [
    "DegenerateBoundError",
    "DegenerateHullError",
    "DimensionError",
    "DomainError",
    "Empty",
    "EmptyIntersectionError",
    "Form",
    "GenerationExhaustedError",
    "Interval",
    "IntervalError",
    "IntervalLinearSystem",
    "IntervalMatrix",
    "IntervalOverflowError",
    "IntervalVector",
    "IterationResult",
    "NonSquareError",
    "NotCertifiedError",
    "OperatorInputs",
    "RegularityCertificate",
    "SingularMidpointError",
    "StoppingRule",
    "UDBounds",
    "UDMode",
    "UDSource",
    "VerificationFailedError",
    "approx_mid_inverse",
    "assemble_ud",
    "certify_regular",
    "cheap_lower_bound_d",
    "cheap_lower_bound_u",
    "comparison_matrix",
    "contains",
    "gauss_seidel_step",
    "gs_iterative",
    "gs_limit",
    "gs_then_operator",
    "initial_box",
    "intersect",
    "iterate",
    "krawczyk_limit",
    "krawczyk_step",
    "mag",
    "magnitude_enclosure",
    "magnitude_enclosure_gamma0",
    "matmul",
    "matvec",
    "mid",
    "new_operator",
    "new_operator_row",
    "ning_kearfott_hull",
    "precondition_relax",
    "prepare",
    "rad",
    "subset",
    "verified_inverse_diag",
    "verified_point_solve",
]
