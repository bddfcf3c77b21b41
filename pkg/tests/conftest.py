from fractions import Fraction

import numpy as np
import pytest

from bvtn.bv_core import compute_bd, validate_nodes
from bvtn.oracle import rational_nodes

EXAMPLE_NODES = [
    Fraction(1, 22), Fraction(1, 20), Fraction(1, 18), Fraction(1, 16), Fraction(1, 14),
    Fraction(1, 12), Fraction(1, 10), Fraction(1, 8), Fraction(1, 6), Fraction(1, 4),
    Fraction(1, 2), Fraction(23, 42), Fraction(21, 38), Fraction(19, 34), Fraction(17, 30),
    Fraction(15, 26), Fraction(13, 22), Fraction(11, 18), Fraction(9, 14), Fraction(7, 10),
    Fraction(5, 6),
]


def random_rational_nodes(rng, count, denominator=97):
    """``count`` distinct sorted rationals k / denominator in (0, 1)."""
    ks = rng.choice(np.arange(1, denominator), size=count, replace=False)
    return rational_nodes(Fraction(int(k), denominator) for k in sorted(ks))


def random_float_nodes(rng, count):
    while True:
        x = np.sort(rng.uniform(0.02, 0.98, size=count))
        if count == 1 or np.min(np.diff(x)) > 1e-3:
            return validate_nodes(x.tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(scope="session")
def example_nodes():
    return rational_nodes(EXAMPLE_NODES)


@pytest.fixture(scope="session")
def example_bd(example_nodes):
    return compute_bd(validate_nodes(example_nodes.as_floats()), 20)


@pytest.fixture
def two_nodes():
    return validate_nodes([0.25, 0.5])


@pytest.fixture
def three_nodes():
    return validate_nodes([0.25, 0.5, 0.75])
