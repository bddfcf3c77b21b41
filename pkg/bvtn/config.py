"""
Defaults for the accurate Bernstein-Vandermonde kernels.

Edit these values (or set BVTN_MAX_BITS) instead of threading numbers
through every call.
"""

import os

# Adaptive-precision kernel
DEFAULT_START_BITS = 106
DEFAULT_MAX_BITS = 1024
DEFAULT_STABILIZATION_RTOL = 1e-15
MAX_BITS_ENV = "BVTN_MAX_BITS"

# Values below this magnitude are compared absolutely between precisions
ABSOLUTE_FLOOR = 1e-300

# A trial eigenvalue with |im| > 2^-(prec * IMAG_PREC_FRACTION) |re| counts as complex
IMAG_PREC_FRACTION = 0.5

# Reference engine (decimal digits -> bits conversion adds GUARD_BITS)
REFERENCE_DIGITS = 50
GUARD_BITS = 10

# Double precision
DOUBLE_BITS = 53


def max_bits_from_env(default: int = DEFAULT_MAX_BITS) -> int:
    """Read the precision ceiling from BVTN_MAX_BITS, falling back to ``default``."""
    raw = os.environ.get(MAX_BITS_ENV)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{MAX_BITS_ENV} must be an integer, got {raw!r}")
