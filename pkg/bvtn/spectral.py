"""
Eigenvalues, singular values, QR and least squares of Bernstein-Vandermonde matrices.

The accurate routines never look at a rounded dense A. They expand BD(A)
inside an mpmath context of p bits (the expansion only adds nonnegative
numbers, so every entry is relatively accurate to about 2^-p), run a
standard backward-stable dense algorithm at that precision, and double p
until two successive trials agree. Results are rounded to doubles on
return.

The baseline_* routines are the conventional double-precision LAPACK
algorithms applied to the expanded double matrix, kept for comparison.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import mpmath
import numpy as np
import scipy.linalg
from logzero import logger

from . import config
from .bd_algebra import expand
from .bv_core import BdMatrix
from .errors import DimensionMismatch, NoConvergence, NotSquare, PrecisionExhausted


@dataclass(frozen=True)
class PrecisionPolicy:
    """Adaptive-precision schedule: start at start_bits, double up to max_bits."""

    start_bits: int = config.DEFAULT_START_BITS
    max_bits: int = config.DEFAULT_MAX_BITS
    stabilization_rtol: float = config.DEFAULT_STABILIZATION_RTOL

    def __post_init__(self):
        if not config.DOUBLE_BITS <= self.start_bits <= self.max_bits:
            raise ValueError(
                f"Need {config.DOUBLE_BITS} <= start_bits <= max_bits, got {self.start_bits} and {self.max_bits}."
            )
        if not 0 < self.stabilization_rtol < 1:
            raise ValueError(f"stabilization_rtol must lie in (0, 1), got {self.stabilization_rtol}.")

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionPolicy":
        """Policy whose max_bits comes from BVTN_MAX_BITS unless overridden."""
        overrides.setdefault("max_bits", config.max_bits_from_env())
        return cls(**overrides)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues or singular values, sorted descending."""

    values: np.ndarray
    achieved_bits: int
    stabilized: bool

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class QrResult:
    q: np.ndarray
    r: np.ndarray


@dataclass(frozen=True)
class LsqSolution:
    coefficients: np.ndarray
    residual: np.ndarray
    residual_norm: float


class _TrialFailed(Exception):
    """One precision trial produced nothing usable; try more bits."""


def _context(bits: int) -> mpmath.MPContext:
    # Private context: callers may run trials concurrently
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def _to_mpf(ctx, value):
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)


def _lift(bd: BdMatrix, ctx):
    """Dense A expanded from BD(A) at the context's precision."""
    dense = expand(bd, convert=lambda v: _to_mpf(ctx, v))
    return ctx.matrix(dense.tolist())


def _values_agree(previous: List, current: List, rtol: float) -> bool:
    if len(previous) != len(current):
        return False
    for a, b in zip(previous, current):
        diff = abs(a - b)
        smaller = min(abs(a), abs(b))
        if max(abs(a), abs(b)) < config.ABSOLUTE_FLOOR:
            if diff > config.ABSOLUTE_FLOOR:
                return False
        elif diff > rtol * smaller:
            return False
    return True


def _rows_agree(previous: List[List], current: List[List], rtol: float) -> bool:
    """Row by row normwise agreement (rows of R scale very differently)."""
    for old, new in zip(previous, current):
        scale = max(abs(v) for v in new)
        if max(abs(a - b) for a, b in zip(old, new)) > rtol * scale:
            return False
    return True


def _adaptive(trial: Callable, bd: BdMatrix, policy: PrecisionPolicy, agree: Callable, what: str):
    """
    Run ``trial(bd, ctx)`` at start_bits, 2 start_bits, ... until two
    successive results satisfy ``agree``. Returns (result, bits) for the
    higher precision of the agreeing pair.
    """
    bits = policy.start_bits
    previous = None
    best = None
    while True:
        try:
            current = trial(bd, _context(bits))
        except _TrialFailed as exc:
            logger.debug(f"{what}: trial at {bits} bits failed ({exc})")
            current = None
        else:
            logger.debug(f"{what}: trial at {bits} bits done")
            if previous is not None and agree(previous, current, policy.stabilization_rtol):
                return current, bits
            best = (current, bits)
        previous = current
        if bits >= policy.max_bits:
            break
        bits = min(2 * bits, policy.max_bits)

    logger.warning(f"{what}: no agreement up to {policy.max_bits} bits")
    raise PrecisionExhausted(
        f"{what} did not stabilize to rtol={policy.stabilization_rtol} within {policy.max_bits} bits.",
        partial=best,
    )


def _real_spectrum(ctx, raw) -> List:
    tol = ctx.mpf(2) ** (-int(ctx.prec * config.IMAG_PREC_FRACTION))
    values = []
    for lam in raw:
        re, im = ctx.re(lam), ctx.im(lam)
        if abs(im) > tol * abs(re):
            raise _TrialFailed(f"complex eigenvalue {lam}")
        values.append(re)
    return sorted(values, reverse=True)


def _eigen_trial(bd: BdMatrix, ctx) -> List:
    A = _lift(bd, ctx)
    if A.rows == 1:
        return [A[0, 0]]
    try:
        raw = ctx.eig(A, left=False, right=False)
    except (RuntimeError, ZeroDivisionError) as exc:
        raise _TrialFailed(str(exc))
    return _real_spectrum(ctx, raw)


def _singular_trial(bd: BdMatrix, ctx) -> List:
    A = _lift(bd, ctx)
    if A.cols == 1:
        return [ctx.sqrt(ctx.fsum(A[i, 0] ** 2 for i in range(A.rows)))]
    try:
        raw = ctx.svd_r(A, compute_uv=False)
    except (RuntimeError, ZeroDivisionError) as exc:
        raise _TrialFailed(str(exc))
    return sorted((raw[i] for i in range(len(raw))), reverse=True)


def _qr_in_context(A, ctx):
    """Householder QR with R's diagonal made positive; returns (Q, R square)."""
    Q, R = ctx.qr(A, mode="full")
    cols = A.cols
    for k in range(cols):
        if R[k, k] < 0:
            for j in range(cols):
                R[k, j] = -R[k, j]
            for i in range(A.rows):
                Q[i, k] = -Q[i, k]
    return Q, R[0:cols, 0:cols]


def _qr_trial(bd: BdMatrix, ctx) -> Tuple[List[List], List[List]]:
    A = _lift(bd, ctx)
    Q, R = _qr_in_context(A, ctx)
    q_rows = [[Q[i, j] for j in range(Q.cols)] for i in range(Q.rows)]
    r_rows = [[R[i, j] for j in range(R.cols)] for i in range(R.rows)]
    return q_rows, r_rows


def _to_spectrum(values: List, bits: int, stabilized: bool) -> Spectrum:
    return Spectrum(np.array([float(v) for v in values]), bits, stabilized)


def _spectrum(trial: Callable, bd: BdMatrix, policy: Optional[PrecisionPolicy], what: str) -> Spectrum:
    policy = policy or PrecisionPolicy()
    try:
        values, bits = _adaptive(trial, bd, policy, _values_agree, what)
    except PrecisionExhausted as exc:
        partial = None if exc.partial is None else _to_spectrum(exc.partial[0], exc.partial[1], False)
        raise PrecisionExhausted(str(exc), partial=partial) from None
    return _to_spectrum(values, bits, True)


def eigenvalues(bd: BdMatrix, policy: Optional[PrecisionPolicy] = None) -> Spectrum:
    """
    All eigenvalues of a square Bernstein-Vandermonde matrix, to high relative accuracy.

    Args:
        bd: Bidiagonal decomposition of a square matrix.
        policy: Precision schedule (defaults to PrecisionPolicy()).

    Returns:
        Spectrum sorted descending; achieved_bits is the precision of the
        returned trial.

    Raises:
        NotSquare: bd is rectangular.
        PrecisionExhausted: no two trials agreed; ``partial`` holds the best
            Spectrum (stabilized=False).
    """
    if not bd.is_square:
        raise NotSquare(f"Eigenvalues need a square matrix, got {bd.rows}x{bd.cols}.")
    return _spectrum(_eigen_trial, bd, policy, "eigenvalues")


def singular_values(bd: BdMatrix, policy: Optional[PrecisionPolicy] = None) -> Spectrum:
    """All n+1 singular values, to high relative accuracy (same contract as eigenvalues)."""
    return _spectrum(_singular_trial, bd, policy, "singular values")


def condition_number(bd: BdMatrix, policy: Optional[PrecisionPolicy] = None) -> float:
    """kappa_2(A) = sigma_max / sigma_min from the accurate singular values."""
    sv = singular_values(bd, policy).values
    return float(sv[0] / sv[-1])


def qr(bd: BdMatrix, policy: Optional[PrecisionPolicy] = None) -> QrResult:
    """
    A = Q [R; 0] with Q (l+1)x(l+1) orthogonal and R (n+1)x(n+1) upper
    triangular with positive diagonal, computed in adaptive precision.
    """
    policy = policy or PrecisionPolicy()

    def agree(previous, current, rtol):
        return _rows_agree(previous[1], current[1], rtol)

    try:
        (q_rows, r_rows), bits = _adaptive(_qr_trial, bd, policy, agree, "qr")
    except PrecisionExhausted as exc:
        partial = None
        if exc.partial is not None:
            q_rows, r_rows = exc.partial[0]
            partial = QrResult(_to_array(q_rows), _to_array(r_rows))
        raise PrecisionExhausted(str(exc), partial=partial) from None
    logger.debug(f"qr: {bd.rows}x{bd.cols} at {bits} bits")
    return QrResult(_to_array(q_rows), _to_array(r_rows))


def _to_array(rows: List[List]) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in rows], dtype=np.float64)


def least_squares(bd: BdMatrix, f, policy: Optional[PrecisionPolicy] = None) -> LsqSolution:
    """
    Minimize ||A c - f||_2 through the full QR of A.

    With A = Q [R; 0]: d = Q^T f = [d1; d2], R c = d1, r = Q [0; d2] and
    ||r||_2 = ||d2||_2. Every step runs in the adaptive precision and the
    result is rounded to doubles at the end.

    Args:
        bd: Bidiagonal decomposition, l >= n (full column rank).
        f: Data vector of length l+1.
        policy: Precision schedule.

    Raises:
        DimensionMismatch: f has the wrong length or non-finite entries.
        PrecisionExhausted: coefficients/residual did not stabilize.
    """
    data = np.asarray(f, dtype=np.float64)
    if data.ndim != 1 or data.shape[0] != bd.rows:
        raise DimensionMismatch(f"f must be a vector of length {bd.rows}, got shape {data.shape}.")
    if not np.all(np.isfinite(data)):
        raise DimensionMismatch("f has non-finite entries.")
    policy = policy or PrecisionPolicy()
    f_scale = max(float(np.max(np.abs(data))), config.ABSOLUTE_FLOOR)
    rows, cols = bd.rows, bd.cols

    def trial(bd_, ctx):
        A = _lift(bd_, ctx)
        Q, R = _qr_in_context(A, ctx)
        d = Q.T * ctx.matrix([ctx.mpf(float(v)) for v in data])
        d1 = ctx.matrix([d[i] for i in range(cols)])
        d2 = [d[i] for i in range(cols, rows)]
        c = ctx.U_solve(R, d1)
        padded = ctx.matrix(rows, 1)
        for i, v in enumerate(d2):
            padded[cols + i] = v
        r = Q * padded
        norm = ctx.sqrt(ctx.fsum(v * v for v in d2))
        return [c[i] for i in range(cols)], [r[i] for i in range(rows)], norm

    def agree(previous, current, rtol):
        c_old, r_old, _ = previous
        c_new, r_new, _ = current
        c_scale = max(max(abs(v) for v in c_new), config.ABSOLUTE_FLOOR)
        if max(abs(a - b) for a, b in zip(c_old, c_new)) > rtol * c_scale:
            return False
        return max(abs(a - b) for a, b in zip(r_old, r_new)) <= rtol * f_scale

    def to_solution(result) -> LsqSolution:
        c, r, norm = result
        return LsqSolution(np.array([float(v) for v in c]), np.array([float(v) for v in r]), float(norm))

    try:
        result, bits = _adaptive(trial, bd, policy, agree, "least squares")
    except PrecisionExhausted as exc:
        partial = None if exc.partial is None else to_solution(exc.partial[0])
        raise PrecisionExhausted(str(exc), partial=partial) from None
    logger.debug(f"least_squares: {rows}x{cols} at {bits} bits")
    return to_solution(result)


def _sorted_spectrum(values: np.ndarray) -> Spectrum:
    order = np.argsort(-values, kind="stable")
    return Spectrum(values[order], config.DOUBLE_BITS, True)


def baseline_eigenvalues(a) -> Spectrum:
    """
    Conventional eigenvalues of a dense double matrix (LAPACK Hessenberg QR).

    No relative accuracy is promised: small eigenvalues of an
    ill-conditioned matrix come back with errors of order eps * ||A|| / |lambda|.

    Raises:
        NotSquare: a is not square.
        NoConvergence: LAPACK's QR iteration hit its sweep limit.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"Eigenvalues need a square matrix, got shape {a.shape}.")
    try:
        w = scipy.linalg.eigvals(a)
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergence(f"Baseline eigenvalue iteration did not converge: {exc}") from exc
    if np.any(w.imag != 0):
        logger.warning(f"baseline_eigenvalues: dropping imaginary parts up to {np.max(np.abs(w.imag)):.1e}")
    return _sorted_spectrum(np.real(w).copy())


def baseline_singular_values(a) -> Spectrum:
    """Conventional singular values (Golub-Kahan bidiagonalization + implicit-shift QR)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"Singular values need a 2-D matrix, got shape {a.shape}.")
    try:
        s = scipy.linalg.svd(a, compute_uv=False, lapack_driver="gesvd")
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergence(f"Baseline SVD did not converge: {exc}") from exc
    return _sorted_spectrum(np.asarray(s, dtype=np.float64))
