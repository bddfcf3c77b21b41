"""
Working with a Bernstein-Vandermonde matrix through its bidiagonal decomposition.

With BD(A) = M (see bv_core), the Neville elimination of A is

    F_T ... F_1 A = U,    U = D G_n^{-1} ... G_1^{-1},

where F_t subtracts M[k, t] times row k-1 from row k (k > t, all rows at
once) and G_s^T does the same on U^T with the multipliers M[s, c], c > s.
Hence

    A      = F_1^{-1} ... F_T^{-1} D G_n^{-1} ... G_1^{-1}
    A^{-1} = G_1 ... G_n D^{-1} F_n ... F_1          (square case)

The inverse factors F_t^{-1}, G_s^{-1} only ever add positive multiples of
one row (column) to the next, so expand and matvec on nonnegative data add
nonnegative numbers only. Every function is dtype-agnostic: float64,
Fractions, or mpmath numbers all flow through the same code.
"""

from typing import Callable, Optional

import numpy as np
from logzero import logger

from .bv_core import BdMatrix
from .errors import DimensionMismatch, NotSquare


def _entries(bd: BdMatrix, convert: Optional[Callable]) -> np.ndarray:
    if convert is None:
        return bd.entries
    return np.array([[convert(v) for v in row] for row in bd.entries], dtype=object)


def _as_vector(v, length: int, what: str, like: np.ndarray) -> np.ndarray:
    dtype = object if like.dtype == object else np.float64
    vec = np.array(v, dtype=dtype)
    if vec.ndim != 1 or vec.shape[0] != length:
        raise DimensionMismatch(f"{what} must be a vector of length {length}, got shape {vec.shape}.")
    if dtype == np.float64 and not np.all(np.isfinite(vec)):
        raise ValueError(f"{what} has non-finite entries.")
    return vec


def expand(bd: BdMatrix, convert: Optional[Callable] = None) -> np.ndarray:
    """
    Rebuild the dense (l+1) x (n+1) matrix from its bidiagonal decomposition.

    Starts from D and applies G_n^{-1}, ..., G_1^{-1} on the right, then
    F_T^{-1}, ..., F_1^{-1} on the left. Each step adds a positive multiple
    of the neighbouring column/row, which keeps every entry relatively
    accurate whatever the condition number of A.

    Args:
        bd: Bidiagonal decomposition.
        convert: Optional map applied to every BD entry first, e.g. ``ctx.mpf``
            to expand inside an mpmath context of a chosen precision.
    """
    M = _entries(bd, convert)
    rows, cols = M.shape
    n = cols - 1

    X = np.zeros((rows, cols), dtype=M.dtype)
    if M.dtype == object:
        zero = M[0, 0] - M[0, 0]
        X[:, :] = zero
    for i in range(cols):
        X[i, i] = M[i, i]

    # U = D G_n^{-1} ... G_1^{-1}
    for s in range(n - 1, -1, -1):
        for c in range(s + 1, cols):
            X[: c + 1, c] += M[s, c] * X[: c + 1, c - 1]

    # A = F_1^{-1} ... F_T^{-1} U
    for t in range(min(cols, rows - 1) - 1, -1, -1):
        for k in range(t + 1, rows):
            X[k, :] += M[k, t] * X[k - 1, :]

    logger.debug(f"expand: {rows}x{cols}, dtype={M.dtype}")
    return X


def matvec(bd: BdMatrix, v) -> np.ndarray:
    """
    A v without forming A: G_1^{-1}, ..., G_n^{-1}, D, F_T^{-1}, ..., F_1^{-1}
    applied right to left. For v >= 0 elementwise nothing cancels.

    Raises:
        DimensionMismatch: v does not have n+1 entries.
    """
    M = bd.entries
    rows, cols = M.shape
    n = cols - 1
    y = _as_vector(v, cols, "v", M).copy()

    for s in range(n):
        # G_s^{-1} = (I + M[s, s+1] E_{s,s+1}) ... (I + M[s, n] E_{n-1,n})
        for c in range(n, s, -1):
            y[c - 1] += M[s, c] * y[c]

    out = np.zeros(rows, dtype=y.dtype)
    if y.dtype == object:
        out[:] = y[0] - y[0]
    out[:cols] = np.diagonal(M) * y

    for t in range(min(cols, rows - 1) - 1, -1, -1):
        for k in range(t + 1, rows):
            out[k] += M[k, t] * out[k - 1]
    return out


def determinant(bd: BdMatrix):
    """det A = product of the diagonal pivots (square matrices only)."""
    if not bd.is_square:
        raise NotSquare(f"Determinant needs a square matrix, got {bd.rows}x{bd.cols}.")
    det = bd.entries[0, 0]
    for p in np.diagonal(bd.entries)[1:]:
        det = det * p
    return det


def solve_system(bd: BdMatrix, b) -> np.ndarray:
    """
    Solve A x = b through x = G_1 ... G_n D^{-1} F_n ... F_1 b in O(n^2).

    Args:
        bd: Bidiagonal decomposition of a square matrix.
        b: Right-hand side of length n+1.

    Raises:
        NotSquare: bd is rectangular (use spectral.least_squares).
        DimensionMismatch: b has the wrong length.
    """
    if not bd.is_square:
        raise NotSquare(
            f"solve_system needs a square matrix, got {bd.rows}x{bd.cols}; use least squares instead."
        )
    M = bd.entries
    n = bd.degree
    y = _as_vector(b, n + 1, "b", M).copy()

    # F_t: y_k <- y_k - m(k, t) y_{k-1}, all k > t at once
    for t in range(n):
        y[t + 1:] = y[t + 1:] - M[t + 1:, t] * y[t:-1]

    y = y / np.diagonal(M)

    # G_s: y_{c-1} <- y_{c-1} - m~(c, s) y_c, all c > s at once; G_n first
    for s in range(n - 1, -1, -1):
        y[s:n] = y[s:n] - M[s, s + 1:] * y[s + 1:]

    logger.debug(f"solve_system: n={n}")
    return y
