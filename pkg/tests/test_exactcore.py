import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from catalan_moments.exactcore import (DomainError, ExactMatrix, binomial, double_factorial,
                                       exact_determinant, factorial, leading_principal_minors,
                                       to_rational)


def cofactor_det(rows):
    """Laplace expansion along the first row; slow but obviously right."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * cofactor_det(minor)
    return total


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)


@st.composite
def square(draw, max_order=5):
    n = draw(st.integers(0, max_order))
    return [[draw(rationals) for _ in range(n)] for _ in range(n)]


@given(square())
@settings(max_examples=150, deadline=None)
def test_determinant_matches_cofactor_expansion(rows):
    assert exact_determinant(ExactMatrix(rows)) == cofactor_det(rows)


@given(square())
@settings(max_examples=100, deadline=None)
def test_leading_minors_match_cofactor(rows):
    M = ExactMatrix(rows)
    want = [cofactor_det([r[:j] for r in rows[:j]]) for j in range(1, len(rows) + 1)]
    assert leading_principal_minors(M) == want


def test_zero_pivot_then_nonzero_minor():
    # first minor vanishes, later ones do not
    rows = [[0, 1, 2], [1, 0, 3], [2, 3, 1]]
    assert leading_principal_minors(ExactMatrix(rows)) == [0, -1, cofactor_det(rows)]


def test_identity_and_empty():
    assert exact_determinant(ExactMatrix.identity(6)) == 1
    assert exact_determinant(ExactMatrix([])) == 1


def test_matrix_must_be_square():
    with pytest.raises(DomainError):
        ExactMatrix([[1, 2], [3]])


def test_pascal_rule_to_60():
    for n in range(1, 61):
        for k in range(1, n):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)
        assert binomial(n, 0) == binomial(n, n) == 1


def test_binomial_domain():
    with pytest.raises(DomainError):
        binomial(3, 5)


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert [double_factorial(m) for m in (1, 3, 5, 7)] == [1, 3, 15, 105]
    assert double_factorial(19) == math.prod(range(1, 20, 2))
    for bad in (2, -3):
        with pytest.raises(DomainError):
            double_factorial(bad)


def test_factorial():
    assert factorial(0) == 1 and factorial(10) == 3628800


def test_to_rational_is_decimal_faithful():
    assert to_rational(0.1) == Fraction(1, 10)
    assert to_rational("3/7") == Fraction(3, 7)
    assert to_rational("0.25") == Fraction(1, 4)
    assert to_rational(5) == 5
