from fractions import Fraction

import mpmath
import numpy as np
import pytest

from bvtn.bv_core import compute_bd
from bvtn.errors import DegreeExceedsRows, LengthMismatch, NonMonotonic
from bvtn.oracle import (
    check_pivot_minors,
    digits_to_bits,
    neville_exact,
    rational_nodes,
    reference_determinant,
    reference_least_squares,
    reference_solution,
    reference_spectrum,
    relative_errors,
)

from .conftest import random_rational_nodes


def test_rational_nodes_from_strings():
    nodes = rational_nodes(["1/22", "0.25", Fraction(1, 2)])
    assert nodes.nodes == (Fraction(1, 22), Fraction(1, 4), Fraction(1, 2))


def test_rational_nodes_checked_exactly():
    with pytest.raises(NonMonotonic):
        rational_nodes(["1/3", "1/3"])


class TestNevilleExact:
    def test_two_by_two(self):
        bd, table = neville_exact(rational_nodes(["1/4", "1/2"]), 1)
        assert bd.entries.tolist() == [
            [Fraction(3, 4), Fraction(1, 3)],
            [Fraction(2, 3), Fraction(1, 3)],
        ]
        assert table.pivots[(1, 0)] == Fraction(1, 2)
        assert table.multipliers[(1, 0)] == Fraction(2, 3)

    def test_single_node(self):
        bd, _ = neville_exact(rational_nodes(["2/5"]), 0)
        assert bd.entries.tolist() == [[Fraction(1)]]

    def test_matches_closed_forms(self, rng):
        for _ in range(20):
            count = int(rng.integers(1, 10))
            nodes = random_rational_nodes(rng, count)
            degree = int(rng.integers(0, count))
            bd, _ = neville_exact(nodes, degree)
            assert bd.entries.tolist() == compute_bd(nodes, degree, exact=True).entries.tolist()

    def test_everything_positive(self, rng):
        nodes = random_rational_nodes(rng, 7)
        bd, table = neville_exact(nodes, 5)
        assert all(v > 0 for v in bd.entries.ravel())
        assert all(p > 0 for p in table.pivots.values())
        assert all(m > 0 for m in table.multipliers.values())

    def test_degree_too_large(self):
        with pytest.raises(DegreeExceedsRows):
            neville_exact(rational_nodes(["1/4", "1/2"]), 2)


class TestCheckPivotMinors:
    def test_two_by_two(self):
        assert check_pivot_minors(rational_nodes(["1/4", "1/2"]), 1)

    def test_degree_zero(self):
        assert check_pivot_minors(rational_nodes(["1/3"]), 0)

    def test_six_random_nodes(self, rng):
        assert check_pivot_minors(random_rational_nodes(rng, 6), 5)


class TestExactReferences:
    def test_determinant(self):
        assert reference_determinant(rational_nodes(["1/4", "1/2"]), 1) == Fraction(1, 4)

    def test_determinant_needs_square(self):
        with pytest.raises(LengthMismatch):
            reference_determinant(rational_nodes(["1/4", "1/2", "3/4"]), 1)

    def test_solution(self):
        assert reference_solution(rational_nodes(["1/4", "1/2"]), 1, [1, 0]) == [Fraction(2), Fraction(-2)]

    def test_least_squares(self):
        c, r = reference_least_squares(rational_nodes(["1/4", "1/2", "3/4"]), 1, [1, 0, 0])
        assert c == [Fraction(4, 3), Fraction(-2, 3)]
        assert r == [Fraction(1, 6), Fraction(-1, 3), Fraction(1, 6)]

    def test_least_squares_length(self):
        with pytest.raises(LengthMismatch):
            reference_least_squares(rational_nodes(["1/4", "1/2", "3/4"]), 1, [1, 0])


class TestReferenceSpectrum:
    def test_digits_to_bits(self):
        assert digits_to_bits(50) == 177

    def test_two_by_two_eigen(self):
        ref = reference_spectrum(rational_nodes(["1/4", "1/2"]), 1)
        assert ref.bits == 177
        assert abs(ref.values[0] - 1) < mpmath.mpf(10) ** -48
        assert abs(ref.values[1] - mpmath.mpf(1) / 4) < mpmath.mpf(10) ** -48

    def test_two_by_two_singular(self):
        ref = reference_spectrum(rational_nodes(["1/4", "1/2"]), 1, kind="singular")
        with mpmath.workdps(60):
            expected = mpmath.sqrt((9 - mpmath.sqrt(65)) / 16)
        assert abs(ref.values[1] - expected) < mpmath.mpf(10) ** -45

    def test_too_few_digits(self):
        with pytest.raises(ValueError):
            reference_spectrum(rational_nodes(["1/4", "1/2"]), 1, digits=30)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            reference_spectrum(rational_nodes(["1/4", "1/2"]), 1, kind="both")

    def test_example_eigenvalues_are_real(self, example_nodes):
        ref = reference_spectrum(example_nodes, 20)
        assert len(ref) == 21
        assert all(v > 0 for v in ref.values)
        assert list(ref.values) == sorted(ref.values, reverse=True)
        assert ref.values[-1] < mpmath.mpf(10) ** -11

    def test_digits_agree(self, example_nodes):
        low = reference_spectrum(example_nodes, 20, digits=50)
        high = reference_spectrum(example_nodes, 20, digits=60)
        for a, b in zip(low.values, high.values):
            assert abs(a - b) <= mpmath.mpf(10) ** -45 * abs(b)


class TestRelativeErrors:
    def test_columns(self):
        ref = reference_spectrum(rational_nodes(["1/4", "1/2"]), 1)
        report = relative_errors(ref, [1.0, 0.25 * (1 + 2.0 ** -50)])
        assert list(report.columns) == ["reference", "computed", "rel_error"]
        assert report["rel_error"].iloc[0] < 1e-40
        assert report["rel_error"].iloc[1] == pytest.approx(2.0 ** -50, rel=1e-6)

    def test_length_mismatch(self):
        ref = reference_spectrum(rational_nodes(["1/4", "1/2"]), 1)
        with pytest.raises(LengthMismatch):
            relative_errors(ref, np.array([1.0]))
