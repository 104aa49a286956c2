"""Exact integer/rational arithmetic and fraction-free linear algebra.

Rationals are :class:`fractions.Fraction`, which already keeps every value
in lowest terms with a positive denominator.  Matrices are immutable
square grids of rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

ExactRational = Fraction


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings and floats to a Fraction.

    Floats go through ``repr`` so that ``0.1`` becomes ``1/10`` rather than
    the binary expansion of the double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError(f"binomial({n}, {k}): arguments must be nonnegative")
    if k > n:
        raise DomainError(f"binomial({n}, {k}): k exceeds n")
    return math.comb(n, k)


def factorial(n: int) -> int:
    if n < 0:
        raise DomainError(f"factorial({n}) is undefined")
    return math.factorial(n)


def double_factorial(m: int) -> int:
    """Product of the odd numbers up to ``m``; ``double_factorial(-1) == 1``."""
    if m == -1:
        return 1
    if m < 1 or m % 2 == 0:
        raise DomainError(f"double_factorial({m}): need an odd m >= 1 or m == -1")
    return math.prod(range(1, m + 1, 2))


class ExactMatrix:
    """Immutable square matrix of rationals, indexed 0..order-1."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_rational(v) for v in row) for row in rows)
        if any(len(r) != len(rows) for r in rows):
            raise DomainError("matrix must be square")
        self._rows = rows

    @property
    def order(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"ExactMatrix({[[str(v) for v in r] for r in self._rows]})"

    def leading(self, j: int) -> "ExactMatrix":
        """Top-left ``j x j`` block."""
        return ExactMatrix(r[:j] for r in self._rows[:j])

    @classmethod
    def identity(cls, order: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(order)] for i in range(order)])


def _cleared(M: ExactMatrix) -> tuple[list[list[int]], int]:
    # scale by the lcm of all denominators so elimination runs over integers
    lcm = 1
    for row in M.rows:
        for v in row:
            lcm = math.lcm(lcm, v.denominator)
    ints = [[v.numerator * (lcm // v.denominator) for v in row] for row in M.rows]
    return ints, lcm


def _bareiss_det(a: list[list[int]]) -> int:
    """Determinant of an integer matrix (destroys ``a``); row swaps on zero pivots."""
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def exact_determinant(M: ExactMatrix) -> Fraction:
    ints, lcm = _cleared(M)
    return Fraction(_bareiss_det(ints), lcm ** M.order)


def leading_principal_minors(M: ExactMatrix) -> list[Fraction]:
    """Minors of orders 1..order; entry ``j-1`` uses rows/cols ``0..j-1``.

    Without row exchanges the Bareiss pivot at step ``k`` is exactly the
    leading minor of order ``k+1`` of the integer-scaled matrix.  A zero pivot
    stops that shortcut and the remaining minors are computed one by one.
    """
    n = M.order
    ints, lcm = _cleared(M)
    a = [row[:] for row in ints]
    minors: list[Fraction] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(Fraction(pivot, lcm ** (k + 1)))
        if pivot == 0:
            for j in range(k + 2, n + 1):
                minors.append(exact_determinant(M.leading(j)))
            return minors
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors

