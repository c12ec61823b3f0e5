import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from phaserank import (
    ComparisonMatrix,
    DimensionError,
    NonnegMatrix,
    PhasedMatrix,
    comparison_matrix,
    hadamard_power,
    numerical_rank,
    rational_det,
    rational_rank,
)
from phaserank.matrix import bareiss_leading_minors, integer_matrix, rationalize

from conftest import D4_ROWS, i_plus_j, identity

small_int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(small_int_matrices)
def test_rational_rank_matches_sympy(rows):
    assert rational_rank(rows) == sympy.Matrix(rows).rank()


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_rational_det_matches_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows]).det()
    assert rational_det(rows) == Fraction(int(expected.p), int(expected.q))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_leading_minors_match_direct_determinants(rows):
    n = len(rows)
    expected = [sympy.Matrix([r[:k] for r in rows[:k]]).det() for k in range(1, n + 1)]
    assert bareiss_leading_minors(rows) == expected


def test_fixture_ranks():
    assert rational_rank(D4_ROWS) == 4
    assert rational_rank(NonnegMatrix.ones(4, 6)) == 1
    assert rational_rank(i_plus_j(5)) == 5
    assert rational_rank([[0, 0], [0, 0]]) == 0


def test_rational_det_rejects_rectangular():
    with pytest.raises(DimensionError):
        rational_det([[1, 2, 3], [4, 5, 6]])


def test_integer_matrix_common_denominator():
    ints, den = integer_matrix([[Fraction(1, 2), Fraction(1, 3)], [1, Fraction(5, 6)]])
    assert den == 6
    assert ints == [[3, 2], [6, 5]]


def test_nonneg_matrix_validation():
    with pytest.raises(ValueError):
        NonnegMatrix([[1, -1]])
    with pytest.raises(DimensionError):
        NonnegMatrix([[1, 2], [3]])
    with pytest.raises(DimensionError):
        NonnegMatrix([])


def test_nonneg_matrix_accessors():
    A = NonnegMatrix([[1, 2, 3], [4, 5, 6]])
    assert A.shape == (2, 3)
    assert A[1, 2] == 6
    assert A.column(1) == (2, 5)
    assert A.T.shape == (3, 2)
    assert A.submatrix(cols=[2, 0]).rows == ((3, 1), (6, 4))
    assert A.permute_columns([2, 0, 1]).rows[0] == (3, 1, 2)
    assert NonnegMatrix([[0, 0], [1, 0]]).zero_rows() == [0]
    assert A == NonnegMatrix([["1", "2", "3"], [4, 5.0, 6]])


def test_float_entries_are_rationalized():
    A = NonnegMatrix([[0.1, 0.5]])
    assert A[0, 0] == Fraction(1, 10)
    assert abs(rationalize(math.pi) - Fraction(math.pi)) <= 1e-12


def test_comparison_matrix():
    Z = comparison_matrix(D4_ROWS)
    assert isinstance(Z, ComparisonMatrix)
    assert Z.rows[0] == (0, -1, -1, -1)
    assert Z.abs() == NonnegMatrix(D4_ROWS)
    with pytest.raises(DimensionError):
        comparison_matrix([[1, 2, 3]])


def test_comparison_matrix_sign_pattern_enforced():
    with pytest.raises(ValueError):
        ComparisonMatrix([[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        ComparisonMatrix([[-1, 0], [0, 1]])


def test_phased_matrix_normalizes_phases():
    B = PhasedMatrix([[0, 1], [2, 3]], [[1.0, -np.pi], [7.0, 2 * np.pi]])
    assert B.phase[0, 0] == 0.0
    assert B.phase[0, 1] == pytest.approx(np.pi)
    assert B.phase[1, 0] == pytest.approx(7.0 - 2 * np.pi)
    assert B.phase[1, 1] == 0.0
    with pytest.raises(ValueError):
        B.phase[0, 1] = 1.0
    with pytest.raises(DimensionError):
        PhasedMatrix([[1, 2]], [[0.0]])


def test_numerical_rank_methods_agree(np_rng):
    for _ in range(50):
        n, m, r = np_rng.integers(2, 7), np_rng.integers(2, 7), np_rng.integers(1, 4)
        X = (np_rng.normal(size=(n, r)) + 1j * np_rng.normal(size=(n, r))) @ np_rng.normal(size=(r, m))
        expected = min(r, n, m)
        assert numerical_rank(X, 1e-8) == expected
        assert numerical_rank(X, 1e-8, method="elimination") == expected


def test_numerical_rank_of_real_embedding():
    assert numerical_rank(PhasedMatrix.real(D4_ROWS)) == 4
    assert numerical_rank(PhasedMatrix.real(NonnegMatrix.ones(3))) == 1


def test_hadamard_power_exact_cases():
    A = NonnegMatrix([[4, 9], [Fraction(1, 4), 0]])
    root = hadamard_power(A, Fraction(1, 2))
    assert not root.approximate
    assert root.rows == ((2, 3), (Fraction(1, 2), 0))
    assert hadamard_power(A, 2).rows[0] == (16, 81)


def test_hadamard_power_irrational_keeps_exact_square():
    A = NonnegMatrix([[2, 3], [5, 1]])
    root = hadamard_power(A, Fraction(1, 2))
    assert root.approximate
    assert root.hadamard_square() == A
    assert abs(float(root[0, 0]) - math.sqrt(2)) <= 1e-12


def test_identity_and_ones():
    assert NonnegMatrix.identity(3) == NonnegMatrix(identity(3))
    assert NonnegMatrix.ones(2, 3).shape == (2, 3)
