"""Accurate computations with totally positive Bernstein-Vandermonde matrices."""

from .bd_algebra import determinant, expand, matvec, solve_system
from .bv_core import BdMatrix, NodeSet, bernstein_vandermonde, compute_bd, validate_nodes
from .errors import (
    BvtnError,
    DegreeExceedsRows,
    DimensionMismatch,
    EmptyNodes,
    LengthMismatch,
    NoConvergence,
    NodeError,
    NonMonotonic,
    NotSquare,
    OutOfRange,
    PrecisionExhausted,
    UnderflowDetected,
    ZeroPivot,
)
from .fitting import evaluate, fit, interpolate
from .spectral import (
    LsqSolution,
    PrecisionPolicy,
    QrResult,
    Spectrum,
    baseline_eigenvalues,
    baseline_singular_values,
    condition_number,
    eigenvalues,
    least_squares,
    qr,
    singular_values,
)
