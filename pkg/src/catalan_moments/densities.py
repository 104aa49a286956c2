"""Closed-form densities and the series identities tied to their moments.

Each density comes with a quadrature oracle for its moments.  The
arcsine-type densities become trigonometric polynomials under
``x = 2 - 2 cos(theta)`` (or ``1 - cos(theta)``, ``2 cos(theta)``), so an
equispaced rule integrates them exactly once it has enough nodes.  The
order-2 Fuss-Catalan density and the chi-square density go through
tanh-sinh quadrature.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional

import mpmath
from mpmath import mp

from .exactcore import DomainError
from .quadrature import QuadratureResult, periodic_trapezoid, tanh_sinh
from .sequences import Family, FamilyId, family, generate
from .special import to_mpf

DEFAULT_TOL = 1e-12
QUAD_PRECISION = 128


class DensityId(str, enum.Enum):
    CATALAN = "catalan"
    CENTRAL_BINOMIAL = "central-binomial"
    SCALED_ARCSINE = "scaled-arcsine"
    SYMMETRIC_ARCSINE = "symmetric-arcsine"
    CHI_SQUARE_1 = "chi-square-1"
    FUSS_CATALAN_2 = "fuss-catalan-2"


@dataclass(frozen=True)
class DensityModel:
    """A density on ``support`` with algebraic endpoint exponents.

    ``exponents`` gives the power of the distance to each endpoint in the
    local behaviour of the density (``None`` at an infinite endpoint).
    ``closed_right`` marks supports of the form (lo, hi].
    """

    id: DensityId
    support: tuple
    exponents: tuple
    moments: Optional[FamilyId]
    closed_right: bool = False

    def contains(self, x) -> bool:
        lo, hi = (None if b is None else to_mpf(b) for b in self.support)
        if not x > lo:
            return False
        if hi is None:
            return True
        return x <= hi if self.closed_right else x < hi


_27_4 = Fraction(27, 4)

MODELS = {
    DensityId.CATALAN: DensityModel(DensityId.CATALAN, (0, 4), (Fraction(-1, 2), Fraction(1, 2)),
                                    family(Family.CATALAN), closed_right=True),
    DensityId.CENTRAL_BINOMIAL: DensityModel(DensityId.CENTRAL_BINOMIAL, (0, 4),
                                             (Fraction(-1, 2), Fraction(-1, 2)),
                                             family(Family.CENTRAL_BINOMIAL)),
    DensityId.SCALED_ARCSINE: DensityModel(DensityId.SCALED_ARCSINE, (0, 2),
                                           (Fraction(-1, 2), Fraction(-1, 2)),
                                           family(Family.CENTRAL_BINOMIAL_SCALED)),
    DensityId.SYMMETRIC_ARCSINE: DensityModel(DensityId.SYMMETRIC_ARCSINE, (-2, 2),
                                              (Fraction(-1, 2), Fraction(-1, 2)), None),
    DensityId.CHI_SQUARE_1: DensityModel(DensityId.CHI_SQUARE_1, (0, None), (Fraction(-1, 2), None),
                                         family(Family.DOUBLE_FACTORIAL)),
    DensityId.FUSS_CATALAN_2: DensityModel(DensityId.FUSS_CATALAN_2, (0, _27_4),
                                           (Fraction(-2, 3), Fraction(1, 2)),
                                           family(Family.FUSS_CATALAN, k=2), closed_right=True),
}


def model(which) -> DensityModel:
    return MODELS[DensityId(which)]


def _fuss2(x, gap):
    # gap = 27/4 - x, passed separately to keep 1 - 4x/27 accurate near the edge
    r = 1 + mp.sqrt(max(4 * gap / 27, 0))
    num = 3 * mp.cbrt(r) ** 2 - mp.cbrt(2) ** 2 * mp.cbrt(x)
    den = mp.cbrt(2) ** 4 * mp.sqrt(3) * mp.pi * mp.cbrt(x) ** 2 * mp.cbrt(r)
    return num / den


def _evaluate(mid: DensityId, x, gap=None):
    if mid is DensityId.CATALAN:
        return mp.sqrt((4 - x) / x) / (2 * mp.pi)
    if mid is DensityId.CENTRAL_BINOMIAL:
        return 1 / (mp.pi * mp.sqrt(x * (4 - x)))
    if mid is DensityId.SCALED_ARCSINE:
        return 1 / (mp.pi * mp.sqrt(x * (2 - x)))
    if mid is DensityId.SYMMETRIC_ARCSINE:
        return 1 / (mp.pi * mp.sqrt(4 - x * x))
    if mid is DensityId.CHI_SQUARE_1:
        return mp.exp(-x / 2) / mp.sqrt(2 * mp.pi * x)
    return _fuss2(x, to_mpf(_27_4) - x if gap is None else gap)


def density_eval(m: DensityModel, x, prec: int = QUAD_PRECISION):
    with mp.workprec(prec):
        x = to_mpf(x)
        if not m.contains(x):
            raise DomainError(f"x={mpmath.nstr(x, 10)} is outside the support of {m.id.value}")
        return _evaluate(m.id, x)


def _chi_square_cutoff(n: int, tol):
    """Truncation point T with the tail of x^n f(x) beyond T below tol/2.

    For T >= 4n the factor x^(n-1/2) e^(-x/4) is decreasing, which gives
    tail <= 4 T^(n-1/2) e^(-T/2) / sqrt(2 pi).
    """
    T = mp.mpf(max(4 * n, 8))
    while True:
        bound = 4 * T ** (n - mp.mpf(0.5)) * mp.exp(-T / 2) / mp.sqrt(2 * mp.pi)
        if bound < tol / 2:
            return T, bound
        T *= mp.mpf(1.25)


def moment_quadrature(m: DensityModel, n: int, tol=DEFAULT_TOL, prec: int = QUAD_PRECISION) -> QuadratureResult:
    """Approximate the n-th moment of ``m`` with an estimate of the error.

    Convergence is declared when successive node doublings differ by at
    most ``tol * max(1, |value|)``.
    """
    if n < 0:
        raise DomainError("moment order must be nonnegative")
    if tol <= 0:
        raise DomainError("tol must be positive")
    with mp.workprec(prec):
        tol = mp.mpf(tol)
        mid = m.id
        if mid is DensityId.CATALAN:
            res = periodic_trapezoid(lambda t: (2 - 2 * mp.cos(t)) ** n * (1 + mp.cos(t)) / mp.pi, tol)
        elif mid is DensityId.CENTRAL_BINOMIAL:
            res = periodic_trapezoid(lambda t: (2 - 2 * mp.cos(t)) ** n / mp.pi, tol)
        elif mid is DensityId.SCALED_ARCSINE:
            res = periodic_trapezoid(lambda t: (1 - mp.cos(t)) ** n / mp.pi, tol)
        elif mid is DensityId.SYMMETRIC_ARCSINE:
            res = periodic_trapezoid(lambda t: (2 * mp.cos(t)) ** n / mp.pi, tol)
        elif mid is DensityId.FUSS_CATALAN_2:
            res = tanh_sinh(lambda x, dl, dr: x ** n * _fuss2(x, dr), 0, _27_4, tol)
        else:
            # x = u^2 removes the x^(-1/2) endpoint singularity
            T, tail = _chi_square_cutoff(n, tol)
            c = 2 / mp.sqrt(2 * mp.pi)
            res = tanh_sinh(lambda u, dl, dr: c * u ** (2 * n) * mp.exp(-u * u / 2), 0, mp.sqrt(T), tol)
            res = QuadratureResult(res.value, res.errest + tail, res.nodes, "tanh-sinh-truncated")
        return res


def exact_moments(m: DensityModel, N: int) -> list[Fraction]:
    """The exact moments the density should reproduce."""
    if m.moments is not None:
        return list(generate(m.moments, N).terms)
    central = generate(family(Family.CENTRAL_BINOMIAL), N // 2).terms
    return [central[n // 2] if n % 2 == 0 else Fraction(0) for n in range(N + 1)]


def moment_table(m: DensityModel, N: int, tol=DEFAULT_TOL, prec: int = QUAD_PRECISION) -> list[dict]:
    """Rows (n, quadrature, exact, relative residual) for n = 0..N."""
    rows = []
    exact = exact_moments(m, N)
    with mp.workprec(prec):
        for n in range(N + 1):
            q = moment_quadrature(m, n, tol, prec)
            e = to_mpf(exact[n])
            res = abs(q.value - e) / abs(e) if e != 0 else abs(q.value)
            rows.append({"n": n, "quadrature": mpmath.nstr(q.value, 30),
                         "exact": str(exact[n]), "residual": mpmath.nstr(res, 6),
                         "nodes": q.nodes, "scheme": q.scheme})
    return rows


def density_grid(m: DensityModel, points: int = 200, prec: int = 53, x_max=None) -> list[dict]:
    """Plot data: (x, f(x)) on an interior grid of the support."""
    lo, hi = m.support
    hi = x_max if hi is None else hi
    if hi is None:
        hi = 12
    with mp.workprec(prec):
        lo_m, hi_m = to_mpf(lo), to_mpf(hi)
        step = (hi_m - lo_m) / (points + 1)
        xs = [lo_m + (i + 1) * step for i in range(points)]
        return [{"x": mpmath.nstr(x, 15), "density": mpmath.nstr(_evaluate(m.id, x), 15)} for x in xs]


# -- series identities ------------------------------------------------------


def bessel_I(order: int, t, prec: int = 256):
    """Modified Bessel function I_0 or I_1 from its power series."""
    if order not in (0, 1):
        raise DomainError("only orders 0 and 1 are provided")
    with mp.workprec(prec + 16):
        t = to_mpf(t)
        q = (t / 2) ** 2
        term = (t / 2) ** order / factorial(order)
        total = mp.mpf(0)
        eps = mp.ldexp(1, -prec - 8)
        k = 0
        while True:
            total += term
            k += 1
            term *= q / (k * (k + order))
            if term == 0 or (k > q and abs(term) < eps * abs(total)):
                break
    with mp.workprec(prec):
        return +total


def _exp2_series(K):
    return [Fraction(2 ** j, factorial(j)) for j in range(K + 1)]


def _bessel_series(order: int, K):
    """Coefficients of t^m in I_order(2t): 1/(k! (k+order)!) at m = 2k + order."""
    out = [Fraction(0)] * (K + 1)
    k = 0
    while 2 * k + order <= K:
        out[2 * k + order] = Fraction(1, factorial(k) * factorial(k + order))
        k += 1
    return out


def _cauchy(a, b):
    K = len(a) - 1
    return [sum(a[i] * b[m - i] for i in range(m + 1)) for m in range(K + 1)]


def _inverse_sqrt_series(K):
    """Coefficients of (1 - 2t)^(-1/2) from the generalized binomial theorem."""
    out = [Fraction(1)]
    for j in range(K):
        # binom(-1/2, j+1) (-2)^(j+1) from the previous coefficient
        out.append(out[-1] * Fraction(-1, 2) - out[-1] * j)
        out[-1] = out[-1] * Fraction(-2, j + 1)
    return out


MGF_CHECKS = ("central-binomial", "catalan", "symmetric-z", "chi-square-1")


def mgf_coefficients(which: str, K: int) -> tuple[list[Fraction], list[Fraction]]:
    """(series coefficients of the closed-form mgf, m_n / n!) up to t^K."""
    if K < 1:
        raise DomainError("K must be at least 1")
    if which == "central-binomial":
        series = _cauchy(_exp2_series(K), _bessel_series(0, K))
        moments = generate(family(Family.CENTRAL_BINOMIAL), K).terms
    elif which == "catalan":
        diff = [p - q for p, q in zip(_bessel_series(0, K), _bessel_series(1, K))]
        series = _cauchy(_exp2_series(K), diff)
        moments = generate(family(Family.CATALAN), K).terms
    elif which == "symmetric-z":
        series = _bessel_series(0, K)
        moments = exact_moments(MODELS[DensityId.SYMMETRIC_ARCSINE], K)
    elif which == "chi-square-1":
        series = _inverse_sqrt_series(K)
        moments = generate(family(Family.DOUBLE_FACTORIAL), K).terms
    else:
        raise DomainError(f"unknown mgf check {which!r}; choose from {MGF_CHECKS}")
    return series, [Fraction(m) / factorial(n) for n, m in enumerate(moments)]


def mgf_series_check(which: str, K: int) -> Fraction:
    """Largest coefficient gap between the mgf's series and m_n/n!; exact."""
    series, target = mgf_coefficients(which, K)
    return max(abs(a - b) for a, b in zip(series, target))


def catalan_gf(x, prec: int = 256):
    """(1 - sqrt(1 - 4x)) / (2x), continued to 1 at x = 0."""
    with mp.workprec(prec + 16):
        x = to_mpf(x)
        if x > mp.mpf(1) / 4:
            raise DomainError("the generating function is real only for x <= 1/4")
        if x == 0:
            value = mp.mpf(1)
        else:
            value = 2 / (1 + mp.sqrt(1 - 4 * x))
    with mp.workprec(prec):
        return +value


@dataclass(frozen=True)
class SeriesResidual:
    residual: object
    bound: object
    terms: int
    method: str = "partial-sum"

    @property
    def within_bound(self) -> bool:
        return self.residual <= self.bound


def generating_function_check(x, K: int, prec: int = 256) -> SeriesResidual:
    """Gap between the closed form and the partial sum through C_K x^K.

    ``bound`` is C_{K+1}|x|^{K+1}/(1 - 4|x|), valid because C_{n+1} <= 4 C_n.
    """
    with mp.workprec(prec + 16):
        x = to_mpf(x)
        if not abs(x) < mp.mpf(1) / 4:
            raise DomainError("the series converges only for |x| < 1/4")
        cat = generate(family(Family.CATALAN), K + 1).terms
        partial = mp.fsum(to_mpf(cat[n]) * x ** n for n in range(K + 1))
        residual = abs(catalan_gf(x, prec + 16) - partial)
        bound = to_mpf(cat[K + 1]) * abs(x) ** (K + 1) / (1 - 4 * abs(x))
    return SeriesResidual(residual, bound, K + 1)


def antu_identity_check(alpha, K: int = 200, prec: int = 256, window: int = 40) -> SeriesResidual:
    """Gap in sin^2(alpha/2) = sum_{n>=1} C_{n-1} (sin(alpha)/2)^(2n).

    ``bound`` is the exact-at-the-edge remainder bound
    (4y)^(K+1) B_K / (2 4^K) with y = (sin(alpha)/2)^2, from the telescoping
    C_j/4^j = 2 (B_j/4^j - B_{j+1}/4^{j+1}).  When it is too large for the
    partial sum to be useful (alpha near pi/2) the first ``window`` partial
    sums are Levin-u accelerated instead.
    """
    with mp.workprec(prec + 16):
        a = to_mpf(alpha)
        if a < 0 or a > mp.pi / 2 + mp.ldexp(1, -prec):
            raise DomainError("alpha must lie in [0, pi/2]")
        y = (mp.sin(a) / 2) ** 2
        lhs = mp.sin(a / 2) ** 2
        cat = generate(family(Family.CATALAN), K).terms
        partials = []
        s = mp.mpf(0)
        for n in range(1, K + 1):
            s += to_mpf(cat[n - 1]) * y ** n
            partials.append(s)
        bound = (4 * y) ** (K + 1) * comb(2 * K, K) / (2 * mp.mpf(4) ** K)
        if bound <= mp.ldexp(1, -(prec // 2)):
            return SeriesResidual(abs(lhs - s), bound, K)
        m = min(K, window)
        with mp.workprec(2 * prec):
            accel = mpmath.levin(method="levin", variant="u")
            value, _ = accel.update_psum(partials[:m])
            check, _ = mpmath.levin(method="levin", variant="u").update_psum(partials[:m - 10])
            spread = abs(value - check)
        if spread < bound:
            return SeriesResidual(abs(lhs - value), spread, m, "levin-u")
        return SeriesResidual(abs(lhs - s), bound, K)


def uniform_product_check(N: int, tol=DEFAULT_TOL, prec: int = QUAD_PRECISION) -> dict:
    """Moments of X*U against the Catalan moments, exactly and by quadrature.

    Exact part: B_n/(n+1) = C_n and binom((k+1)n, n)/(kn+1) = C_{k,n} for k = 2..6.
    Numeric part: the n-th moment of the central-binomial density divided by
    n+1 against the Catalan density's n-th moment, both by quadrature.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    B = generate(family(Family.CENTRAL_BINOMIAL), N).terms
    C = generate(family(Family.CATALAN), N).terms
    exact_ok = all(B[n] / (n + 1) == C[n] for n in range(N + 1))
    fuss_ok = True
    for k in range(2, 7):
        Y = generate(family(Family.FUSS_BINOMIAL, k=k), N).terms
        X = generate(family(Family.FUSS_CATALAN, k=k), N).terms
        fuss_ok &= all(Y[n] / (k * n + 1) == X[n] for n in range(N + 1))
    worst = mp.mpf(0)
    with mp.workprec(prec):
        for n in range(min(N, 20) + 1):
            xu = moment_quadrature(MODELS[DensityId.CENTRAL_BINOMIAL], n, tol, prec).value / (n + 1)
            cat = moment_quadrature(MODELS[DensityId.CATALAN], n, tol, prec).value
            worst = max(worst, abs(xu - cat) / abs(cat))
    return {"exact": exact_ok, "fuss_division": fuss_ok, "quadrature_residual": worst}


def symmetry_square_check(N: int, tol=DEFAULT_TOL, prec: int = QUAD_PRECISION) -> dict:
    """Odd moments of Z = X - 2 vanish and E[Z^(2n)] = B_n, by quadrature."""
    zmodel = MODELS[DensityId.SYMMETRIC_ARCSINE]
    B = generate(family(Family.CENTRAL_BINOMIAL), N).terms
    odd, even = mp.mpf(0), mp.mpf(0)
    with mp.workprec(prec):
        for j in range(2 * N + 1):
            v = moment_quadrature(zmodel, j, tol, prec).value
            if j % 2:
                odd = max(odd, abs(v))
            else:
                b = to_mpf(B[j // 2])
                even = max(even, abs(v - b) / b)
    return {"odd_max": odd, "even_residual": even, "passed": bool(odd < tol and even < tol)}
