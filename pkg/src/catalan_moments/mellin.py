"""Closed-form Mellin transforms of the powered moment measures.

Every transform has the form ``M_c(s) = M_1(s)**c``, so each family only
needs ``log M_1(s)``, written in terms of :func:`log_gamma`.  At integer
``s = n`` the transform must reproduce the moment ``m_n**c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .exactcore import DomainError, to_rational
from .sequences import DEFAULT_PRECISION, Family, FamilyId, family, generate, power, scale
from .special import GUARD_BITS, log_gamma, to_mpf

__all__ = [
    "MellinForm", "MellinRangeError", "log_gamma", "mellin", "mellin_form",
    "dual_form", "mellin_moment_consistency", "duplication_check",
    "mellin_scaling_check", "tabulate", "DUAL_FORM_FAMILIES",
]


class MellinRangeError(DomainError):
    """The exponent lies past the determinacy boundary, where no transform is asserted."""


# (limit on c * weight, weight, rule text); c * weight <= limit is required
_RANGES = {
    Family.DOUBLE_FACTORIAL: (2, lambda f: 1, "double-factorial powers are determinate iff c <= 2"),
    Family.FACTORIAL: (2, lambda f: 1, "factorial powers are determinate iff c <= 2"),
    Family.EVEN_FACTORIAL: (1, lambda f: 1, "(2n)! powers are determinate iff c <= 1"),
    Family.K_FACTORIAL: (2, lambda f: f.k, "(kn)! powers are determinate iff k c <= 2"),
    Family.GAMMA_POWER: (2, lambda f: f.a, "Gamma(an+1) powers are conjectured determinate iff a c <= 2"),
}

_CONJECTURAL = {Family.GAMMA_POWER, Family.K_FACTORIAL}


def _log_m1(fid: FamilyId, s, prec: int):
    lg = lambda x: log_gamma(x, prec)  # noqa: E731
    tag = fid.tag
    if tag is Family.CATALAN:
        return lg(2 * s + 1) - 2 * lg(s + 1) - mp.log(s + 1)
    if tag is Family.CENTRAL_BINOMIAL:
        return lg(2 * s + 1) - 2 * lg(s + 1)
    if tag is Family.CENTRAL_BINOMIAL_SCALED:
        return lg(2 * s + 1) - 2 * lg(s + 1) - s * mp.ln2
    if tag is Family.DOUBLE_FACTORIAL:
        return lg(2 * s + 1) - lg(s + 1) - s * mp.ln2
    if tag is Family.FACTORIAL:
        return lg(s + 1)
    if tag is Family.EVEN_FACTORIAL:
        return lg(2 * s + 1)
    if tag is Family.FUSS_CATALAN:
        k = fid.k
        return lg((k + 1) * s + 1) - lg(s + 1) - lg(k * s + 1) - mp.log(k * s + 1)
    if tag is Family.FUSS_BINOMIAL:
        k = fid.k
        return lg((k + 1) * s + 1) - lg(s + 1) - lg(k * s + 1)
    if tag is Family.K_FACTORIAL:
        return lg(fid.k * s + 1)
    if tag is Family.GAMMA_POWER:
        return lg(to_mpf(fid.a) * s + 1)
    raise DomainError(f"no closed-form transform for {fid.name}")


def check_range(fid: FamilyId, c) -> None:
    """Raise :class:`MellinRangeError` if ``c`` is past the family's boundary."""
    if fid.tag not in _RANGES:
        return
    limit, weight, rule = _RANGES[fid.tag]
    if to_rational(c) * weight(fid) > limit:
        raise MellinRangeError(f"{fid.name} at c={to_rational(c)}: {rule}; "
                               "use the uncertified option to evaluate anyway")


@dataclass(frozen=True)
class MellinForm:
    """``s -> M_c(s)`` for one family and exponent."""

    family: FamilyId
    c: Fraction
    prec: int = DEFAULT_PRECISION
    uncertified: bool = False

    @property
    def conjectural(self) -> bool:
        return self.family.tag in _CONJECTURAL

    def log(self, s):
        with mp.workprec(self.prec + GUARD_BITS):
            s = to_mpf(s)
            if s < 0:
                raise DomainError("transforms are only defined here for real s >= 0")
            return to_mpf(self.c) * _log_m1(self.family, s, self.prec + GUARD_BITS)

    def __call__(self, s):
        with mp.workprec(self.prec + GUARD_BITS):
            value = mp.exp(self.log(s))
        with mp.workprec(self.prec):
            return +value


def mellin_form(fid: FamilyId, c, prec: int = DEFAULT_PRECISION, uncertified: bool = False) -> MellinForm:
    c = to_rational(c)
    if c <= 0:
        raise DomainError(f"exponent must be positive, got {c}")
    if not uncertified:
        check_range(fid, c)
    return MellinForm(fid, c, prec, uncertified)


def mellin(fid: FamilyId, c, s, prec: int = DEFAULT_PRECISION, uncertified: bool = False):
    return mellin_form(fid, c, prec, uncertified)(s)


DUAL_FORM_FAMILIES = (Family.CATALAN, Family.CENTRAL_BINOMIAL,
                      Family.CENTRAL_BINOMIAL_SCALED, Family.DOUBLE_FACTORIAL)


def dual_form(fid: FamilyId, c, s, prec: int = DEFAULT_PRECISION):
    """The half-integer gamma form of the transform, e.g. ``2^{2s} G(s+1/2) / (sqrt(pi) G(s+2))``.

    It agrees with :func:`mellin` only through the duplication formula, so
    comparing the two is a real consistency check.
    """
    c = to_rational(c)
    with mp.workprec(prec + GUARD_BITS):
        s = to_mpf(s)
        p = prec + GUARD_BITS
        half = log_gamma(s + mp.mpf(0.5), p) - mp.log(mp.pi) / 2
        tag = fid.tag
        if tag is Family.CATALAN:
            val = 2 * s * mp.ln2 + half - log_gamma(s + 2, p)
        elif tag is Family.CENTRAL_BINOMIAL:
            val = 2 * s * mp.ln2 + half - log_gamma(s + 1, p)
        elif tag is Family.CENTRAL_BINOMIAL_SCALED:
            val = s * mp.ln2 + half - log_gamma(s + 1, p)
        elif tag is Family.DOUBLE_FACTORIAL:
            val = s * mp.ln2 + half
        else:
            raise DomainError(f"no second closed form for {fid.name}")
        out = mp.exp(to_mpf(c) * val)
    with mp.workprec(prec):
        return +out


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def mellin_moment_consistency(fid: FamilyId, c, N: int, prec: int = DEFAULT_PRECISION,
                              uncertified: bool = False):
    """Largest relative gap between ``M_c(n)`` and the power sequence ``m_n^c`` over n <= N."""
    form = mellin_form(fid, c, prec, uncertified)
    moments = power(generate(fid, N, prec), form.c, prec)
    worst = mp.mpf(0)
    with mp.workprec(prec + GUARD_BITS):
        for n in range(N + 1):
            worst = max(worst, _rel(form(n), moments.terms[n]))
    return worst


def duplication_check(x, prec: int = DEFAULT_PRECISION):
    """Relative gap in ``G(x) G(x+1/2) = 2^{1-2x} sqrt(pi) G(2x)``."""
    with mp.workprec(prec + GUARD_BITS):
        x = to_mpf(x)
        if not x > 0:
            raise DomainError("duplication_check needs x > 0")
        p = prec + GUARD_BITS
        lhs = log_gamma(x, p) + log_gamma(x + mp.mpf(0.5), p)
        rhs = (1 - 2 * x) * mp.ln2 + mp.log(mp.pi) / 2 + log_gamma(2 * x, p)
        residual = abs(mp.expm1(lhs - rhs))
    with mp.workprec(prec):
        return +residual


def mellin_scaling_check(fid: FamilyId, a, c, s, prec: int = DEFAULT_PRECISION):
    """Residual of the scaling law ``a^{-cs} M_c(s) = (a^{-s} M_1(s))^c``.

    The left side scales the powered transform; the right side powers the
    scaled base transform.  At integer ``s`` both are also compared with the
    moment of the exactly scaled sequence, ``(m_s / a^s)^c``.
    """
    a = to_rational(a)
    form = mellin_form(fid, c, prec)
    base = mellin_form(fid, 1, prec, uncertified=True)
    with mp.workprec(prec + GUARD_BITS):
        s_m = to_mpf(s)
        lna = mp.log(to_mpf(a))
        lhs = mp.exp(-form.c * s_m * lna) * form(s_m)
        rhs = (mp.exp(-s_m * lna) * base(s_m)) ** to_mpf(form.c)
        residual = _rel(lhs, rhs)
        s_q = to_rational(s) if not isinstance(s, mpmath.mpf) else None
        if s_q is not None and s_q.denominator == 1:
            n = int(s_q)
            scaled = scale(generate(fid, n, prec), 1 / a)
            direct = power(scaled, form.c, prec).terms[n]
            residual = max(residual, _rel(lhs, direct))
    with mp.workprec(prec):
        return +residual


def tabulate(fid: FamilyId, c, s_grid, prec: int = DEFAULT_PRECISION,
             uncertified: bool = False, digits: int = 40) -> list[dict]:
    form = mellin_form(fid, c, prec, uncertified)
    return [{"s": str(s), "mellin": mpmath.nstr(form(s), digits, strip_zeros=False)}
            for s in s_grid]


def scaled_family_check(prec: int = DEFAULT_PRECISION, s=3):
    """Halving the central binomial variable lands exactly on the scaled family's transform."""
    with mp.workprec(prec + GUARD_BITS):
        via_law = mp.exp(-to_mpf(s) * mp.ln2) * mellin(family(Family.CENTRAL_BINOMIAL), 1, s, prec + GUARD_BITS)
        direct = mellin(family(Family.CENTRAL_BINOMIAL_SCALED), 1, s, prec + GUARD_BITS)
        residual = _rel(via_law, direct)
    with mp.workprec(prec):
        return +residual
