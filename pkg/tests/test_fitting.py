import numpy as np
import pytest

from bvtn.errors import DimensionMismatch, OutOfRange
from bvtn.fitting import evaluate, fit, interpolate


def test_evaluate_partition_of_unity():
    x = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(evaluate(np.ones(6), x), np.ones(11), rtol=1e-15)


def test_evaluate_linear():
    assert evaluate([0.0, 1.0], 0.3) == pytest.approx(0.3, rel=1e-15)


def test_evaluate_scalar_returns_float():
    assert isinstance(evaluate([1.0, 2.0, 4.0], 0.5), float)
    assert evaluate([1.0, 2.0, 4.0], 0.5) == pytest.approx(2.25)


def test_evaluate_empty():
    with pytest.raises(DimensionMismatch):
        evaluate([], 0.5)


def test_interpolate_reproduces_data():
    nodes = [0.1, 0.3, 0.45, 0.7, 0.9]
    values = [1.0, -2.0, 0.5, 3.0, 0.0]
    coefficients = interpolate(nodes, values)
    np.testing.assert_allclose(evaluate(coefficients, nodes), values, atol=1e-12)


def test_interpolate_length_mismatch():
    with pytest.raises(DimensionMismatch):
        interpolate([0.2, 0.4], [1.0])


def test_interpolate_bad_nodes():
    with pytest.raises(OutOfRange):
        interpolate([0.0, 0.5], [1.0, 2.0])


def test_fit_recovers_polynomial():
    c0 = np.array([1.0, -0.5, 2.0])
    nodes = np.linspace(0.05, 0.95, 9)
    solution = fit(nodes.tolist(), evaluate(c0, nodes), 2)
    np.testing.assert_allclose(solution.coefficients, c0, rtol=1e-12)
    assert solution.residual_norm <= 1e-13


def test_fit_square_matches_interpolate():
    nodes = [0.2, 0.4, 0.6, 0.8]
    values = [0.0, 1.0, 1.0, 0.0]
    np.testing.assert_allclose(fit(nodes, values, 3).coefficients, interpolate(nodes, values), rtol=1e-12, atol=1e-14)
