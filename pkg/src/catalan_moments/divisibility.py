"""Bernstein-function factorizations, Carleman diagnostics and the determinacy classifier.

Each family below is a product ``s_n = h(1) h(2) ... h(n)`` (or a product of
k such sequences) with ``f(x) = h(x + shift)`` a Bernstein function, which
makes the sequence infinitely divisible.  The ``h`` are either Moebius
``p - q/(x + r)`` or affine ``p x + q`` with rational coefficients; the
Fuss families also carry a factor ``(k+1)^(1/k)``, tracked as an integer
count of radicals so products stay exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import mpmath
from mpmath import mp

from .exactcore import DomainError, to_rational
from .sequences import DEFAULT_PRECISION, Family, FamilyId, family, generate
from .special import log_gamma, to_mpf


@dataclass(frozen=True)
class HFunction:
    name: str
    kind: str  # "mobius" or "affine"
    p: Fraction
    q: Fraction
    r: Fraction = Fraction(0)
    shift: Fraction = Fraction(1, 2)
    k: Optional[int] = None
    ell: Optional[int] = None
    radicals: int = 0

    def rational_part(self, x) -> Fraction:
        x = to_rational(x)
        if self.kind == "affine":
            return self.p * x + self.q
        return self.p - self.q / (x + self.r)

    @property
    def pole(self) -> Optional[Fraction]:
        """Pole of f(x) = h(x + shift), if any."""
        if self.kind == "affine":
            return None
        return -(self.shift + self.r)

    def f_derivative(self, j: int, x) -> Fraction:
        """j-th derivative of the rational part of f(x) = h(x + shift), exactly."""
        x = to_rational(x)
        if self.kind == "affine":
            if j == 1:
                return self.p
            return Fraction(0)
        y = x + self.shift + self.r
        return (-1) ** (j + 1) * math.factorial(j) * self.q / y ** (j + 1)


def _mobius(name, p, q, r, **kw) -> HFunction:
    return HFunction(name, "mobius", Fraction(p), Fraction(q), Fraction(r), **kw)


FACTORIZATIONS = ("catalan", "central-binomial", "central-binomial-scaled",
                  "double-factorial", "fuss-catalan", "fuss-binomial")


def h_functions(name: str, k: Optional[int] = None) -> list[HFunction]:
    """The factor functions whose products give the named family."""
    if name == "catalan":
        return [_mobius(name, 4, 6, 1)]  # 2(2 - 3/(x+1))
    if name == "central-binomial":
        return [_mobius(name, 4, 2, 0)]  # 2(2 - 1/x)
    if name == "central-binomial-scaled":
        return [_mobius(name, 2, 1, 0)]  # 2 - 1/x
    if name == "double-factorial":
        return [HFunction(name, "affine", Fraction(2), Fraction(-1))]  # 2x - 1
    if name in ("fuss-catalan", "fuss-binomial"):
        if k is None or k < 2:
            raise DomainError(f"{name} factorization needs k >= 2")
        out = []
        for ell in range(1, k + 1):
            if name == "fuss-catalan":
                q = Fraction(2 * k - ell + 2, k * k)
                r = Fraction(-(ell - 2), k)
            else:
                q = Fraction(k - ell + 1, k * k)
                r = Fraction(-(ell - 1), k)
            out.append(_mobius(name, Fraction(k + 1, k), q, r, shift=Fraction(ell, k + 1),
                               k=k, ell=ell, radicals=1))
        return out
    raise DomainError(f"unknown factorization {name!r}; choose from {FACTORIZATIONS}")


def _target_family(name: str, k: Optional[int]) -> FamilyId:
    return {
        "catalan": lambda: family(Family.CATALAN),
        "central-binomial": lambda: family(Family.CENTRAL_BINOMIAL),
        "central-binomial-scaled": lambda: family(Family.CENTRAL_BINOMIAL_SCALED),
        "double-factorial": lambda: family(Family.DOUBLE_FACTORIAL),
        "fuss-catalan": lambda: family(Family.FUSS_CATALAN, k=k),
        "fuss-binomial": lambda: family(Family.FUSS_BINOMIAL, k=k),
    }[name]()


def radical_power(k: int, count: int) -> Fraction:
    """(k+1)^(count/k) as an exact rational; ``count`` must be a multiple of k."""
    if count % k:
        raise DomainError(f"(k+1)^({count}/{k}) is irrational")
    return Fraction(k + 1) ** (count // k)


def bernstein_product_check(name: str, N: int, k: Optional[int] = None) -> bool:
    """Exactly verify prod_l prod_{i<=n} h_l(i) equals the family term for all n <= N."""
    if N < 1:
        raise DomainError("N must be at least 1")
    hs = h_functions(name, k)
    target = generate(_target_family(name, k), N).terms
    rational = Fraction(1)
    count = 0
    for n in range(1, N + 1):
        for h in hs:
            rational *= h.rational_part(n)
            count += h.radicals
        value = rational if count == 0 else rational * radical_power(k, count)
        if value != target[n]:
            return False
    return True


def log_grid(points: int = 50, lo=Fraction(1, 100), hi=Fraction(100)) -> list[Fraction]:
    """Geometric grid from ``lo`` to ``hi`` as rationals (endpoints exact)."""
    lo_f, hi_f = float(lo), float(hi)
    ratio = (hi_f / lo_f) ** (1 / (points - 1))
    grid = [Fraction(lo_f * ratio ** i).limit_denominator(10 ** 12) for i in range(1, points - 1)]
    return [Fraction(lo)] + grid + [Fraction(hi)]


def complete_monotonicity_check(hf: HFunction, J: int = 8, grid: Optional[Iterable] = None,
                                shift=None) -> bool:
    """Check (-1)^(j-1) f^(j)(x) >= 0 for j = 1..J on ``grid``, exactly.

    That is, f' is completely monotone on the grid and f is a Bernstein
    function there.  The positive radical factor does not affect signs.
    """
    if J < 1:
        raise DomainError("J must be at least 1")
    if shift is not None:
        hf = HFunction(hf.name, hf.kind, hf.p, hf.q, hf.r, to_rational(shift), hf.k, hf.ell, hf.radicals)
    grid = [to_rational(x) for x in (log_grid() if grid is None else grid)]
    if any(x <= 0 for x in grid):
        raise DomainError("grid points must be positive")
    pole = hf.pole
    if pole is not None and pole >= 0:
        raise DomainError(f"{hf.name}: pole at x={pole} lies inside the domain")
    for x in grid:
        for j in range(1, J + 1):
            if (-1) ** (j - 1) * hf.f_derivative(j, x) < 0:
                return False
    return True


def all_h_functions(ks: Iterable[int] = range(2, 7)) -> list[HFunction]:
    out = []
    for name in FACTORIZATIONS[:4]:
        out.extend(h_functions(name))
    for name in FACTORIZATIONS[4:]:
        for k in ks:
            out.extend(h_functions(name, k))
    return out


# -- determinacy -------------------------------------------------------------


class Determinacy(str, enum.Enum):
    DET = "S-det"
    INDET = "S-indet"
    DET_CONJECTURED = "S-det-conjectured"
    INDET_CONJECTURED = "S-indet-conjectured"


@dataclass(frozen=True)
class Classification:
    verdict: Determinacy
    citation: str

    @property
    def determinate(self) -> bool:
        return self.verdict in (Determinacy.DET, Determinacy.DET_CONJECTURED)


_BOUNDED = {Family.CATALAN, Family.CENTRAL_BINOMIAL, Family.CENTRAL_BINOMIAL_SCALED,
            Family.FUSS_CATALAN, Family.FUSS_BINOMIAL}


def propagate_indeterminacy(factor: Classification, other_positive: bool = True) -> Optional[Classification]:
    """A product of Stieltjes sequences with an indeterminate factor and a positive cofactor is indeterminate."""
    if factor.verdict is Determinacy.INDET and other_positive:
        return Classification(Determinacy.INDET, f"product with an indeterminate factor ({factor.citation})")
    return None


def _factorial_power(c: Fraction) -> Classification:
    if c <= 2:
        return Classification(Determinacy.DET, "(n!)^c is determinate iff c <= 2")
    return Classification(Determinacy.INDET, "(n!)^c is determinate iff c <= 2")


def determinacy_classify(fid: FamilyId, c) -> Classification:
    """Rule-based verdict on whether {m_n^c} has a unique representing measure."""
    c = to_rational(c)
    if c <= 0:
        raise DomainError("c must be positive")
    tag = fid.tag
    if tag in _BOUNDED:
        return Classification(Determinacy.DET, f"{fid.tag.value}: bounded support, determinate for every c > 0")
    if tag is Family.FACTORIAL:
        return _factorial_power(c)
    if tag is Family.GAMMA_POWER:
        if fid.a * c <= 2:
            return Classification(Determinacy.DET_CONJECTURED, "Gamma(an+1)^c conjectured determinate iff a c <= 2")
        return Classification(Determinacy.INDET_CONJECTURED, "Gamma(an+1)^c conjectured determinate iff a c <= 2")
    # these split as (n!)^(weight c) times a positive Stieltjes sequence
    weight, rule = {
        Family.DOUBLE_FACTORIAL: (1, "D_n^c is determinate iff c <= 2"),
        Family.EVEN_FACTORIAL: (2, "((2n)!)^c is determinate iff c <= 1"),
        Family.K_FACTORIAL: (fid.k, "((kn)!)^c is determinate iff k c <= 2"),
    }[tag]
    derived = propagate_indeterminacy(_factorial_power(weight * c))
    if derived is not None:
        return Classification(Determinacy.INDET, f"{rule}; {derived.citation}")
    return Classification(Determinacy.DET, f"{rule}; Carleman's condition holds")


# -- Carleman ----------------------------------------------------------------

CARLEMAN_MARGIN = 0.05


class CarlemanVerdict(str, enum.Enum):
    DIVERGES = "DivergesLikely"
    CONVERGES = "ConvergesLikely"
    BOUNDARY = "BoundaryInconclusive"


@dataclass(frozen=True)
class CarlemanDiagnostic:
    family: FamilyId
    c: Fraction
    N: int
    partial_sums: tuple
    rho_hat: float
    verdict: CarlemanVerdict
    theorem_verdict: Classification

    @property
    def agrees(self) -> Optional[bool]:
        """Whether the heuristic matches the classifier; None inside the margin band."""
        if self.verdict is CarlemanVerdict.BOUNDARY:
            return None
        return (self.verdict is CarlemanVerdict.DIVERGES) == self.theorem_verdict.determinate

    def to_record(self) -> dict:
        return {
            "family": self.family.tag.value,
            "params": self.family.params,
            "c": str(self.c),
            "N": self.N,
            "rho_hat": round(self.rho_hat, 12),
            "verdict": self.verdict.value,
            "theorem_verdict": self.theorem_verdict.verdict.value,
            "citation": self.theorem_verdict.citation,
        }


def _log_moments(fid: FamilyId, N: int, prec: int) -> list:
    seq = generate(fid, N, prec)
    if seq.exact:
        return [mp.log(m.numerator) - mp.log(m.denominator) for m in seq.terms]
    return [mp.mpf(0)] + [log_gamma(fid.a * n + 1, prec) for n in range(1, N + 1)]


def carleman_diagnose(fid: FamilyId, c, N: int = 64, prec: int = DEFAULT_PRECISION) -> CarlemanDiagnostic:
    """Partial sums of sum m_n^(-c/(2n)) and the fitted decay exponent of its terms.

    ``rho_hat`` is the least-squares slope of log(term_n) against log(n) over
    n in [N/2, N].  Terms decaying like n^rho with rho >= -1 make the sum
    diverge, which is sufficient for determinacy.
    """
    if N < 16:
        raise DomainError("N must be at least 16")
    c = to_rational(c)
    if c <= 0:
        raise DomainError("c must be positive")
    with mp.workprec(prec):
        logs = _log_moments(fid, N, prec)
        cm = to_mpf(c)
        log_terms = [-cm * logs[n] / (2 * n) for n in range(1, N + 1)]
        sums, s = [], mp.mpf(0)
        for lt in log_terms:
            s += mp.exp(lt)
            sums.append(s)
        ns = range(N // 2, N + 1)
        xs = [mp.log(n) for n in ns]
        ys = [log_terms[n - 1] for n in ns]
        xbar = mp.fsum(xs) / len(xs)
        ybar = mp.fsum(ys) / len(ys)
        slope = (mp.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
                 / mp.fsum((x - xbar) ** 2 for x in xs))
    rho = float(slope)
    if abs(rho + 1) < CARLEMAN_MARGIN:
        verdict = CarlemanVerdict.BOUNDARY
    elif rho > -1:
        verdict = CarlemanVerdict.DIVERGES
    else:
        verdict = CarlemanVerdict.CONVERGES
    return CarlemanDiagnostic(fid, c, N, tuple(sums), rho, verdict, determinacy_classify(fid, c))


CARLEMAN_GRID = tuple(Fraction(x) for x in ("0.5", "1", "1.5", "1.9", "2.1", "3"))


def boundary(fid: FamilyId) -> Optional[Fraction]:
    """The exponent c where the classifier switches from determinate to not; None if never."""
    tag = fid.tag
    if tag in _BOUNDED:
        return None
    return {
        Family.FACTORIAL: Fraction(2),
        Family.DOUBLE_FACTORIAL: Fraction(2),
        Family.EVEN_FACTORIAL: Fraction(1),
        Family.K_FACTORIAL: Fraction(2, fid.k or 1),
        Family.GAMMA_POWER: Fraction(2) / (fid.a or 1),
    }[tag]
