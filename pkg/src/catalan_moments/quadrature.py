"""Quadrature rules used as moment oracles.

Two schemes, both with node doubling until successive estimates agree:

* ``periodic_trapezoid`` for smooth even periodic integrands on [0, pi],
  which is exact for trigonometric polynomials of degree below twice the
  panel count;
* ``tanh_sinh`` for integrands with algebraic endpoint singularities.
  The integrand receives the distances to both endpoints as well as the
  node itself so it can avoid cancellation next to a finite endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .special import to_mpf


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    errest: object
    nodes: int
    scheme: str


class QuadratureError(ArithmeticError):
    """Raised when the node budget runs out; ``best`` holds the last estimate."""

    def __init__(self, message: str, best: QuadratureResult):
        super().__init__(message)
        self.best = best


def _converged(new, old, tol) -> bool:
    return abs(new - old) <= tol * max(1, abs(new))


def periodic_trapezoid(g, tol, start: int = 4, max_panels: int = 1 << 14) -> QuadratureResult:
    """Integrate an even 2*pi-periodic ``g`` over [0, pi]."""
    M = start
    h = mp.pi / M
    inner = sum(g(j * h) for j in range(1, M))
    ends = (g(mp.mpf(0)) + g(mp.pi)) / 2
    prev = h * (ends + inner)
    while True:
        M *= 2
        h = mp.pi / M
        inner += sum(g(j * h) for j in range(1, M, 2))
        est = h * (ends + inner)
        result = QuadratureResult(est, abs(est - prev), M + 1, "periodic-trapezoid")
        if _converged(est, prev, tol):
            return result
        if M >= max_panels:
            raise QuadratureError("periodic trapezoid did not converge", result)
        prev = est


def _tanh_sinh_level(f, a, b, h, t_start, step):
    """Sum of weight * f over nodes t = t_start, t_start + step, ... (both signs)."""
    half = (b - a) / 2
    eps = mp.ldexp(1, -mp.prec - 4)
    total = mp.mpf(0)
    count = 0
    k = 0
    pi2 = mp.pi / 2
    while True:
        t = t_start + k * step
        k += 1
        u = pi2 * mp.sinh(t)
        e = mp.exp(u)
        cosh_u = (e + 1 / e) / 2
        w = pi2 * mp.cosh(t) / cosh_u ** 2
        gap = half * 2 / (1 + e * e)  # distance of x(+t) to b, and of x(-t) to a
        if gap == 0 or w == 0:
            break
        width = b - a
        right = f(b - gap, width - gap, gap)
        contrib = w * right
        count += 1
        if t != 0:
            left = f(a + gap, gap, width - gap)
            contrib += w * left
            count += 1
        total += contrib
        if t > 1 and abs(contrib) * half * h < eps * max(1, abs(total) * half * h):
            break
        if t > 12:
            break
    return total, count


def tanh_sinh(f, a, b, tol, max_level: int = 12, min_level: int = 3) -> QuadratureResult:
    """Double-exponential quadrature of ``f(x, x - a, b - x)`` over (a, b)."""
    a = to_mpf(a)
    b = to_mpf(b)
    half = (b - a) / 2
    h = mp.mpf(1)
    total, nodes = _tanh_sinh_level(f, a, b, h, mp.mpf(0), h)
    prev = h * half * total
    for level in range(1, max_level + 1):
        h /= 2
        extra, n = _tanh_sinh_level(f, a, b, h, h, 2 * h)
        total += extra
        nodes += n
        est = h * half * total
        result = QuadratureResult(est, abs(est - prev), nodes, "tanh-sinh")
        if level >= min_level and _converged(est, prev, tol):
            return result
        prev = est
    raise QuadratureError("tanh-sinh did not converge within the node budget", result)
