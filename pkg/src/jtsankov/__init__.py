"""Exact verification of Jacobi-Tsankov and 2-step nilpotency conditions.

Algebraic curvature tensors are stored densely with ``fractions.Fraction``
entries; every checker is an exact decision procedure.
"""

from .checkers import (
    ALL_PROPERTIES,
    PropertyVerdict,
    constant_sectional_curvature,
    implication_audit,
    is_2step_jacobi_nilpotent,
    is_2step_skew_nilpotent,
    is_jacobi_tsankov,
    is_orthogonally_jacobi_tsankov,
    is_skew_tsankov,
    jacobi_square_zero,
    recheck,
    run_checks,
)
from .curvature import CurvatureTensor, jacobi, curvature_operator, tensor_from_components, validate_symmetries
from .exact_linalg import InnerProductSpace, Signature
from .structure import decompose_2step, lemma31_witness

__version__ = "0.1.0"

__all__ = [
    "ALL_PROPERTIES",
    "CurvatureTensor",
    "InnerProductSpace",
    "PropertyVerdict",
    "Signature",
    "constant_sectional_curvature",
    "curvature_operator",
    "decompose_2step",
    "implication_audit",
    "is_2step_jacobi_nilpotent",
    "is_2step_skew_nilpotent",
    "is_jacobi_tsankov",
    "is_orthogonally_jacobi_tsankov",
    "is_skew_tsankov",
    "jacobi",
    "jacobi_square_zero",
    "lemma31_witness",
    "recheck",
    "run_checks",
    "tensor_from_components",
    "validate_symmetries",
]
