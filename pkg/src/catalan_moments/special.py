"""High-precision special-function kernels shared by the Mellin and density code."""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from .exactcore import DomainError

GUARD_BITS = 24


def to_mpf(x):
    """Convert ints, Fractions, strings and mpf values to an mpf at the current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return to_mpf(Fraction(x)) if "/" in x else mp.mpf(x)
    return mp.mpf(x)


def _shift_threshold(prec: int) -> int:
    # above this the asymptotic series reaches 2^-prec in O(prec) terms
    return max(12, prec // 3)


def _stirling(x):
    """Asymptotic series for ln Gamma(x), valid for x past the shift threshold."""
    eps = mp.ldexp(1, -mp.prec)
    s = (x - mp.mpf(0.5)) * mp.log(x) - x + mp.log(2 * mp.pi) / 2
    x2 = x * x
    power = x
    k = 1
    last = None
    while True:
        term = mp.bernoulli(2 * k) / (2 * k * (2 * k - 1) * power)
        size = abs(term)
        if size < eps * abs(s):
            break
        if last is not None and size > last:
            raise ArithmeticError("asymptotic series diverged before converging")
        s += term
        last = size
        power *= x2
        k += 1
    return s


def log_gamma(x, prec: int = 256):
    """Natural log of the gamma function for real ``x > 0``.

    Small arguments are shifted upward with ``ln G(x) = ln G(x+m) - ln prod(x+j)``
    until the Stirling series converges to working precision.  Evaluation runs
    with ``GUARD_BITS`` extra bits; the result carries ``prec`` bits.
    """
    with mp.workprec(prec + GUARD_BITS):
        x = to_mpf(x)
        if not x > 0:
            raise DomainError(f"log_gamma needs x > 0, got {mpmath.nstr(x, 10)}")
        if x == 1 or x == 2:
            return mp.mpf(0)
        threshold = _shift_threshold(prec)
        prod = mp.mpf(1)
        while x < threshold:
            prod *= x
            x += 1
        value = _stirling(x) - mp.log(prod)
    with mp.workprec(prec):
        return +value


def gamma(x, prec: int = 256):
    with mp.workprec(prec + GUARD_BITS):
        value = mp.exp(log_gamma(x, prec + GUARD_BITS))
    with mp.workprec(prec):
        return +value
