"""
Polynomial interpolation and regression in the Bernstein basis.

A polynomial of degree <= n on [0, 1] is stored as its Bernstein
coefficients c_0..c_n: p(x) = sum_j c_j C(n, j) x^j (1 - x)^(n - j).
Fitting goes through the accurate BD-based solvers; evaluation uses
de Casteljau's algorithm (convex combinations only).
"""

from typing import Optional, Sequence

import numpy as np

from .bd_algebra import solve_system
from .bv_core import compute_bd, validate_nodes
from .errors import DimensionMismatch
from .spectral import LsqSolution, PrecisionPolicy, least_squares


def evaluate(coefficients: Sequence[float], x):
    """
    Value of the Bernstein-form polynomial at ``x`` (scalar or array).

    Each de Casteljau step replaces b_j by (1 - x) b_j + x b_{j+1}.
    """
    b = np.asarray(coefficients, dtype=np.float64)
    if b.ndim != 1 or b.size == 0:
        raise DimensionMismatch(f"Coefficients must be a non-empty vector, got shape {b.shape}.")
    t = np.asarray(x, dtype=np.float64)
    work = np.broadcast_to(b, t.shape + b.shape).copy()
    t = t[..., np.newaxis]
    for r in range(1, b.size):
        work[..., : b.size - r] = (1.0 - t) * work[..., : b.size - r] + t * work[..., 1 : b.size - r + 1]
    value = work[..., 0]
    return float(value) if value.ndim == 0 else value


def interpolate(nodes: Sequence[float], values: Sequence[float]) -> np.ndarray:
    """Coefficients of the degree-l polynomial through (x_i, values_i), i = 0..l."""
    node_set = validate_nodes(nodes)
    if len(values) != len(node_set):
        raise DimensionMismatch(f"Got {len(node_set)} nodes but {len(values)} values.")
    return solve_system(compute_bd(node_set, node_set.l), values)


def fit(
    nodes: Sequence[float],
    values: Sequence[float],
    degree: int,
    policy: Optional[PrecisionPolicy] = None,
) -> LsqSolution:
    """Least-squares Bernstein coefficients of the given degree for the data."""
    node_set = validate_nodes(nodes)
    return least_squares(compute_bd(node_set, degree), values, policy)
