"""
Ground truth for the accurate kernels.

- neville_exact: the complete Neville elimination carried out over
  Fractions, independent of the closed forms in bv_core.
- check_pivot_minors: pivots recomputed as quotients of exact minors.
- reference_*: high-precision (50 digits by default) spectra and exact
  rational solutions used to score the double-precision pipelines.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd
import sympy
from logzero import logger

from . import config
from .bv_core import BdMatrix, NodeSet, bernstein_vandermonde, validate_nodes
from .errors import DegreeExceedsRows, LengthMismatch, NoConvergence, ZeroPivot


RationalNodeSet = NodeSet


def rational_nodes(raw: Iterable) -> RationalNodeSet:
    """
    Validate nodes exactly after converting each one to a Fraction.

    Accepts Fractions, ints, floats (taken at their exact binary value) and
    strings such as "1/22" or "0.25".
    """
    return validate_nodes(Fraction(x) for x in raw)


@dataclass(frozen=True)
class PivotTable:
    """
    Exact pivots p(i, j) (j <= i) and multipliers m(i, j) = p(i, j) / p(i-1, j)
    (j < i) of the Neville elimination of A, keyed by 0-based (row, column).
    """

    pivots: Dict[Tuple[int, int], Fraction]
    multipliers: Dict[Tuple[int, int], Fraction]


def _neville(rows: List[List[Fraction]], steps: int, pivots=None) -> Dict[Tuple[int, int], Fraction]:
    """
    In-place Neville elimination of the first ``steps`` columns of ``rows``.

    Row k becomes row k - m(k, t) row (k-1) for every k > t, processed bottom
    up so each update sees the previous row as it was before step t.
    """
    multipliers = {}
    height = len(rows)
    for t in range(steps):
        if pivots is not None:
            for i in range(t, height):
                pivots[(i, t)] = rows[i][t]
        for k in range(height - 1, t, -1):
            above = rows[k - 1][t]
            if above == 0:
                raise ZeroPivot(f"Zero pivot at ({k - 1}, {t}); the matrix is not strictly totally positive.")
            m = rows[k][t] / above
            multipliers[(k, t)] = m
            for j in range(t, len(rows[k])):
                rows[k][j] -= m * rows[k - 1][j]
    return multipliers


def neville_exact(nodes: RationalNodeSet, degree: int) -> Tuple[BdMatrix, PivotTable]:
    """
    Complete Neville elimination of the rational Bernstein-Vandermonde matrix.

    Eliminates A down to U, then eliminates U^T; never exchanges rows.

    Returns:
        (BdMatrix over Fractions packed like bv_core.compute_bd, PivotTable).

    Raises:
        ZeroPivot: some pivot vanished (impossible for valid nodes).
    """
    if degree > nodes.l:
        raise DegreeExceedsRows(f"Degree {degree} exceeds l = {nodes.l}.")
    a = bernstein_vandermonde(nodes, degree, exact=True).tolist()
    height, width = len(a), degree + 1

    pivots: Dict[Tuple[int, int], Fraction] = {}
    lower = _neville(a, min(width, height - 1), pivots)
    if height == width:
        pivots[(width - 1, width - 1)] = a[width - 1][width - 1]
    for key, p in pivots.items():
        if p == 0:
            raise ZeroPivot(f"Pivot {key} is zero.")

    ut = [[a[j][i] for j in range(width)] for i in range(width)]
    upper = _neville(ut, width - 1)

    M = [[None] * width for _ in range(height)]
    for i in range(width):
        M[i][i] = pivots[(i, i)]
    for (k, t), m in lower.items():
        M[k][t] = m
    for (c, s), m in upper.items():
        M[s][c] = m

    multipliers = {key: pivots[key] / pivots[(key[0] - 1, key[1])] for key in lower}
    logger.debug(f"neville_exact: l={nodes.l}, n={degree}")
    return BdMatrix(np.array(M, dtype=object)), PivotTable(pivots, multipliers)


def check_pivot_minors(nodes: RationalNodeSet, degree: int) -> bool:
    """
    True iff every pivot equals det A[i-j..i | 0..j] / det A[i-j..i-1 | 0..j-1].

    Exact minors are factorial-cost in the worst case; meant for l <= 8. The
    first mismatch is logged as a warning.
    """
    _, table = neville_exact(nodes, degree)
    a = _sympy_matrix(nodes, degree)

    for (i, j), p in sorted(table.pivots.items()):
        num = a[i - j : i + 1, 0 : j + 1].det(method="bareiss")
        den = a[i - j : i, 0:j].det(method="bareiss") if j > 0 else sympy.Integer(1)
        quotient = num / den
        if _to_sympy(p) != quotient:
            logger.warning(f"check_pivot_minors: pivot ({i}, {j}) = {p} but minor quotient = {quotient}")
            return False
    return True


def _to_sympy(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _sympy_matrix(nodes: RationalNodeSet, degree: int) -> sympy.Matrix:
    exact = bernstein_vandermonde(nodes, degree, exact=True)
    return sympy.Matrix([[_to_sympy(v) for v in row] for row in exact])


def reference_determinant(nodes: RationalNodeSet, degree: int) -> Fraction:
    """Exact determinant of the square rational Bernstein-Vandermonde matrix."""
    if len(nodes) != degree + 1:
        raise LengthMismatch(f"Determinant needs {degree + 1} nodes, got {len(nodes)}.")
    return _from_sympy(_sympy_matrix(nodes, degree).det(method="bareiss"))


def reference_solution(nodes: RationalNodeSet, degree: int, b: Sequence) -> List[Fraction]:
    """Exact rational solution of A x = b for the square matrix."""
    if len(nodes) != degree + 1 or len(b) != degree + 1:
        raise LengthMismatch(f"Need {degree + 1} nodes and right-hand side entries.")
    x = _sympy_matrix(nodes, degree).LUsolve(sympy.Matrix([_to_sympy(v) for v in b]))
    return [_from_sympy(v) for v in x]


def reference_least_squares(
    nodes: RationalNodeSet, degree: int, f: Sequence
) -> Tuple[List[Fraction], List[Fraction]]:
    """Exact (c, r) from the normal equations A^T A c = A^T f, r = f - A c."""
    if len(f) != len(nodes):
        raise LengthMismatch(f"f has {len(f)} entries, expected {len(nodes)}.")
    a = _sympy_matrix(nodes, degree)
    rhs = sympy.Matrix([_to_sympy(v) for v in f])
    c = (a.T * a).LUsolve(a.T * rhs)
    r = rhs - a * c
    return [_from_sympy(v) for v in c], [_from_sympy(v) for v in r]


@dataclass(frozen=True)
class ReferenceSpectrum:
    """High-precision spectrum (mpmath numbers, descending)."""

    values: Tuple
    digits: int
    bits: int

    def __len__(self) -> int:
        return len(self.values)

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + config.GUARD_BITS


def reference_spectrum(
    nodes: RationalNodeSet,
    degree: int,
    kind: str = "eigen",
    digits: int = config.REFERENCE_DIGITS,
) -> ReferenceSpectrum:
    """
    Eigenvalues ("eigen") or singular values ("singular") of the exact
    rational matrix, computed with ``digits`` significant decimal digits.

    The rational matrix is rounded once into the working precision; the
    spectrum then comes from mpmath's QR-type iterations at that precision.

    Raises:
        NoConvergence: the iteration failed or returned complex eigenvalues.
    """
    if digits < config.REFERENCE_DIGITS:
        raise ValueError(f"Reference spectra need at least {config.REFERENCE_DIGITS} digits, got {digits}.")
    if kind not in ("eigen", "singular"):
        raise ValueError(f"kind must be 'eigen' or 'singular', got {kind!r}.")
    if degree > nodes.l:
        raise DegreeExceedsRows(f"Degree {degree} exceeds l = {nodes.l}.")

    bits = digits_to_bits(digits)
    ctx = mpmath.MPContext()
    ctx.prec = bits
    exact = bernstein_vandermonde(nodes, degree, exact=True)
    A = ctx.matrix([[ctx.mpf(v.numerator) / v.denominator for v in row] for row in exact])

    try:
        if kind == "eigen":
            if A.rows != A.cols:
                raise ValueError(f"Eigenvalues need a square matrix, got {A.rows}x{A.cols}.")
            raw = [A[0, 0]] if A.rows == 1 else ctx.eig(A, left=False, right=False)
            # Rounding noise in the imaginary parts scales with the whole spectrum
            threshold = ctx.mpf(10) ** (1 - digits) * max(abs(lam) for lam in raw)
            values = []
            for lam in raw:
                if abs(ctx.im(lam)) > threshold:
                    raise NoConvergence(f"Reference eigenvalue {lam} is not real.")
                values.append(ctx.re(lam))
        elif A.cols == 1:
            values = [ctx.sqrt(ctx.fsum(A[i, 0] ** 2 for i in range(A.rows)))]
        else:
            s = ctx.svd_r(A, compute_uv=False)
            values = [s[i] for i in range(len(s))]
    except (RuntimeError, ZeroDivisionError) as exc:
        raise NoConvergence(f"Reference {kind} computation failed: {exc}") from exc

    logger.debug(f"reference_spectrum: {kind}, {A.rows}x{A.cols}, {digits} digits ({bits} bits)")
    return ReferenceSpectrum(tuple(sorted(values, reverse=True)), digits, bits)


def relative_errors(reference: ReferenceSpectrum, computed) -> pd.DataFrame:
    """
    One row per value: reference, computed, |computed - reference| / |reference|.

    ``computed`` may be a Spectrum or any sequence of floats, sorted
    descending like the reference. The error is evaluated in the
    reference's precision, then rounded.

    Raises:
        LengthMismatch: the two lists differ in length.
    """
    values = getattr(computed, "values", computed)
    values = [float(v) for v in values]
    if len(values) != len(reference):
        raise LengthMismatch(f"Reference has {len(reference)} values, computed has {len(values)}.")
    ctx = mpmath.MPContext()
    ctx.prec = reference.bits
    errors = []
    for ref, val in zip(reference.values, values):
        ref = ctx.mpf(ref)
        errors.append(float(abs(ctx.mpf(val) - ref) / abs(ref)))
    return pd.DataFrame(
        {
            "reference": reference.as_floats(),
            "computed": values,
            "rel_error": errors,
        }
    )
