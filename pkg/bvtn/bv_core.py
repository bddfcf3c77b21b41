"""
Bidiagonal decomposition of Bernstein-Vandermonde matrices.

Given nodes 0 < x_1 < ... < x_{l+1} < 1 and a Bernstein degree n <= l,
builds the packed matrix M = BD(A) of the (l+1) x (n+1) collocation matrix
A[i, j] = C(n, j) x_i^j (1 - x_i)^(n - j) straight from the nodes:

- M[i, i]          diagonal pivots of the Neville elimination of A
- M[i, j], j < i   multipliers of the Neville elimination of A
- M[i, j], i < j   multipliers of the Neville elimination of A^T

A itself is never formed. Every entry is a product or quotient of node
differences x_i - x_k (k < i) and complements 1 - x_i, so the only
subtractions touch raw input data.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, List, Sequence, Tuple

import mpmath
import numpy as np
from logzero import logger

from . import config
from .errors import (
    DegreeExceedsRows,
    DimensionMismatch,
    EmptyNodes,
    NonMonotonic,
    OutOfRange,
    UnderflowDetected,
)


@dataclass(frozen=True)
class NodeSet:
    """Strictly increasing nodes inside (0, 1). Build it with validate_nodes."""

    nodes: Tuple

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def l(self) -> int:
        return len(self.nodes) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.nodes)

    def as_floats(self) -> List[float]:
        """Nodes rounded to the nearest double (bit-exact for float input)."""
        return [float(x) for x in self.nodes]

    def as_fractions(self) -> List[Fraction]:
        """Nodes as exact rationals (exact for float input too)."""
        return [x if isinstance(x, Fraction) else Fraction(x) for x in self.nodes]


def validate_nodes(raw: Iterable) -> NodeSet:
    """
    Check that ``raw`` is a usable node list and wrap it in a NodeSet.

    Values are stored as given (floats stay floats, Fractions stay Fractions).

    Raises:
        EmptyNodes: no nodes at all.
        OutOfRange: some node is <= 0, >= 1 or NaN.
        NonMonotonic: some x_i >= x_{i+1}.
    """
    values = tuple(raw)
    if not values:
        raise EmptyNodes("Node list is empty.")
    for i, x in enumerate(values):
        if not 0 < x < 1:
            raise OutOfRange(f"Node {i} = {x!r} is outside the open interval (0, 1).")
    for i in range(len(values) - 1):
        if not values[i] < values[i + 1]:
            raise NonMonotonic(
                f"Nodes must be strictly increasing: x[{i}] = {values[i]!r} >= x[{i + 1}] = {values[i + 1]!r}."
            )
    return NodeSet(values)


@dataclass(frozen=True)
class BdMatrix:
    """
    Packed bidiagonal decomposition of an (l+1) x (n+1) matrix, l >= n.

    ``entries`` is float64 for the double pipeline, or object dtype holding
    Fractions (rational mode) or mpmath numbers (lifted into a context).
    The same matrix represents the factorization of A and, in the square
    case, of A^{-1}.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=self.entries.dtype if isinstance(self.entries, np.ndarray) else None)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionMismatch(f"BD matrix must be a non-empty 2-D array, got shape {arr.shape}.")
        if arr.shape[0] < arr.shape[1]:
            raise DegreeExceedsRows(
                f"BD matrix has {arr.shape[0]} rows but {arr.shape[1]} columns; need rows >= columns."
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def l(self) -> int:
        return self.rows - 1

    @property
    def degree(self) -> int:
        return self.cols - 1

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    @property
    def pivots(self) -> np.ndarray:
        return np.diagonal(self.entries).copy()

    def to_list(self) -> List[List[float]]:
        """Entries as nested Python floats (the JSON form)."""
        return [[float(v) for v in row] for row in self.entries]

    @classmethod
    def from_list(cls, rows: Sequence[Sequence[float]]) -> "BdMatrix":
        return cls(np.array(rows, dtype=np.float64))


def _double_double() -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = 2 * config.DOUBLE_BITS
    return ctx


def _complement_powers(x: Sequence, top: int, one, ctx=None) -> List[List]:
    """
    Table of (1 - x_r)^k for k = 0..top.

    With ``ctx`` the complement and its powers are formed in the context's
    precision and each power is rounded to a double once; otherwise the
    table is built in the arithmetic of ``one``.
    """
    table = []
    for xi in x:
        if ctx is None:
            base, power, row = one - xi, one, [one]
        else:
            base, power, row = ctx.mpf(1) - ctx.mpf(xi), ctx.mpf(1), [1.0]
        for _ in range(top):
            power *= base
            row.append(power if ctx is None else float(power))
        table.append(row)
    return table


def _bd_entries(x: Sequence, degree: int, one, powers: List[List]) -> List[List]:
    """
    Closed-form BD entries over whatever arithmetic ``one`` belongs to.

    ``powers[r][k]`` is (1 - x_r)^k. Row r sweeps its multipliers left to
    right keeping two running products, prod_{k=1..c} (x_r - x_{r-k}) and
    prod_{k=2..c+1} (x_{r-1} - x_{r-k}), so each entry costs O(1) and the
    whole matrix O(l n).
    """
    n = degree
    rows = len(x)
    M = [[None] * (n + 1) for _ in range(rows)]

    comp_prefix = one  # prod_{k<r} (1 - x_k)
    for r in range(rows):
        num = one
        den = one
        for c in range(min(r, n + 1)):
            if c > 0:
                num *= x[r] - x[r - c]
                den *= x[r - 1] - x[r - c - 1]
            M[r][c] = (powers[r][n - c] * powers[r - c - 1][1] * num) / (powers[r - 1][n - c + 1] * den)

        if r <= n:
            # num now holds prod_{k=1..r-1} (x_r - x_{r-k}); x_0 is the missing factor
            if r > 0:
                num *= x[r] - x[0]
            M[r][r] = one * comb(n, r) * powers[r][n - r] * num / comp_prefix
            comp_prefix *= powers[r][1]
            for c in range(r + 1, n + 1):
                M[r][c] = (n - c + 1) * x[r] / (c * powers[r][1])
    return M


def compute_bd(nodes: NodeSet, degree: int, exact: bool = False) -> BdMatrix:
    """
    Bidiagonal decomposition of the Bernstein-Vandermonde matrix of ``nodes``.

    Args:
        nodes: Validated node set (l + 1 nodes).
        degree: Bernstein degree n, 0 <= n <= l.
        exact: Evaluate the closed forms over Fractions instead of doubles.

    Returns:
        BdMatrix of shape (l+1, n+1); float64, or object dtype when exact.

    Raises:
        DegreeExceedsRows: n > l.
        UnderflowDetected: some double entry rounded to 0 or overflowed.
    """
    if degree < 0:
        raise ValueError(f"Degree must be nonnegative, got {degree}.")
    if degree > nodes.l:
        raise DegreeExceedsRows(f"Degree {degree} exceeds l = {nodes.l} ({len(nodes)} nodes).")

    if exact:
        x = nodes.as_fractions()
        entries = _bd_entries(x, degree, Fraction(1), _complement_powers(x, degree + 1, Fraction(1)))
        arr = np.array(entries, dtype=object)
    else:
        try:
            x = nodes.as_floats()
            entries = _bd_entries(x, degree, 1.0, _complement_powers(x, degree + 1, 1.0, _double_double()))
        except (ZeroDivisionError, OverflowError) as exc:
            raise UnderflowDetected(f"Running products left the double range (l={nodes.l}, n={degree}): {exc}")
        arr = np.array(entries, dtype=np.float64)
        bad = np.argwhere(~np.isfinite(arr) | (arr == 0.0))
        if bad.size:
            i, j = bad[0]
            raise UnderflowDetected(
                f"BD entry ({i}, {j}) = {arr[i, j]!r} left the double range (l={nodes.l}, n={degree})."
            )

    logger.debug(f"compute_bd: l={nodes.l}, n={degree}, exact={exact}")
    return BdMatrix(arr)


def bernstein_vandermonde(nodes: NodeSet, degree: int, exact: bool = False) -> np.ndarray:
    """
    Direct evaluation of A[i, j] = C(n, j) x_i^j (1 - x_i)^(n - j).

    Each entry is an all-positive product, so it is accurate to a few ulps;
    this is the dense matrix the conventional algorithms start from.
    """
    if degree < 0:
        raise ValueError(f"Degree must be nonnegative, got {degree}.")
    if exact:
        x = nodes.as_fractions()
        rows = [[comb(degree, j) * xi ** j * (1 - xi) ** (degree - j) for j in range(degree + 1)] for xi in x]
        return np.array(rows, dtype=object)
    x = nodes.as_floats()
    rows = [[comb(degree, j) * xi ** j * (1.0 - xi) ** (degree - j) for j in range(degree + 1)] for xi in x]
    return np.array(rows, dtype=np.float64)
