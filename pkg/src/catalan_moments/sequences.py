"""Moment-sequence families, their products, scalings and real powers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import iv, mp

from .exactcore import DomainError, binomial, double_factorial, factorial, to_rational
from .special import GUARD_BITS, log_gamma, to_mpf

DEFAULT_N = 32
DEFAULT_PRECISION = 256


class Family(str, enum.Enum):
    CATALAN = "catalan"
    CENTRAL_BINOMIAL = "central-binomial"
    CENTRAL_BINOMIAL_SCALED = "central-binomial-scaled"
    DOUBLE_FACTORIAL = "double-factorial"
    FACTORIAL = "factorial"
    EVEN_FACTORIAL = "even-factorial"
    FUSS_CATALAN = "fuss-catalan"
    FUSS_BINOMIAL = "fuss-binomial"
    K_FACTORIAL = "k-factorial"
    GAMMA_POWER = "gamma-power"


_NEEDS_K = {Family.FUSS_CATALAN, Family.FUSS_BINOMIAL, Family.K_FACTORIAL}


@dataclass(frozen=True)
class FamilyId:
    """A named family plus its parameter; build through :func:`family`."""

    tag: Family
    k: Optional[int] = None
    a: Optional[Fraction] = None

    @property
    def name(self) -> str:
        if self.k is not None:
            return f"{self.tag.value}(k={self.k})"
        if self.a is not None:
            return f"{self.tag.value}(a={self.a})"
        return self.tag.value

    @property
    def params(self) -> dict:
        out = {}
        if self.k is not None:
            out["k"] = self.k
        if self.a is not None:
            out["a"] = str(self.a)
        return out

    def __str__(self) -> str:
        return self.name


def family(tag, k: Optional[int] = None, a=None) -> FamilyId:
    """Validate and canonicalize a family specification.

    Order-1 Fuss families collapse to the Catalan / central binomial
    sequences, and ``k``-factorials with ``k`` of 1 or 2 collapse to the
    factorial / even-factorial sequences.
    """
    tag = Family(tag)
    if tag in _NEEDS_K:
        if k is None or int(k) != k or k < 1:
            raise DomainError(f"{tag.value} needs a positive integer k, got {k!r}")
        k = int(k)
        if tag is Family.FUSS_CATALAN and k == 1:
            return FamilyId(Family.CATALAN)
        if tag is Family.FUSS_BINOMIAL and k == 1:
            return FamilyId(Family.CENTRAL_BINOMIAL)
        if tag is Family.K_FACTORIAL and k <= 2:
            return FamilyId(Family.FACTORIAL if k == 1 else Family.EVEN_FACTORIAL)
        if a is not None:
            raise DomainError(f"{tag.value} takes no parameter a")
        return FamilyId(tag, k=k)
    if tag is Family.GAMMA_POWER:
        if a is None:
            raise DomainError("gamma-power needs a positive rational a")
        a = to_rational(a)
        if a <= 0:
            raise DomainError(f"gamma-power needs a > 0, got {a}")
        if k is not None:
            raise DomainError("gamma-power takes no parameter k")
        return FamilyId(tag, a=a)
    if k is not None or a is not None:
        raise DomainError(f"{tag.value} takes no parameters")
    return FamilyId(tag)


@dataclass(frozen=True)
class MomentSequence:
    """Terms m_0..m_N of a moment sequence.

    Exact sequences hold Fractions.  Inexact ones hold mpf values together
    with per-term relative error bounds and the precision they were built at.
    """

    name: str
    terms: tuple
    family: Optional[FamilyId] = None
    errbounds: Optional[tuple] = None
    precision: Optional[int] = None

    @property
    def exact(self) -> bool:
        return self.errbounds is None

    @property
    def N(self) -> int:
        return len(self.terms) - 1

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, n):
        return self.terms[n]


def _exact_term(fid: FamilyId, n: int) -> int | Fraction:
    tag = fid.tag
    if tag is Family.CATALAN:
        return factorial(2 * n) // (factorial(n) * factorial(n + 1))
    if tag is Family.CENTRAL_BINOMIAL:
        return binomial(2 * n, n)
    if tag is Family.CENTRAL_BINOMIAL_SCALED:
        return Fraction(binomial(2 * n, n), 2 ** n)
    if tag is Family.DOUBLE_FACTORIAL:
        return double_factorial(2 * n - 1)
    if tag is Family.FACTORIAL:
        return factorial(n)
    if tag is Family.EVEN_FACTORIAL:
        return factorial(2 * n)
    k = fid.k
    if tag is Family.FUSS_CATALAN:
        return Fraction(binomial((k + 1) * n, n), k * n + 1)
    if tag is Family.FUSS_BINOMIAL:
        return binomial((k + 1) * n, n)
    if tag is Family.K_FACTORIAL:
        return factorial(k * n)
    if tag is Family.GAMMA_POWER and fid.a.denominator == 1:
        return factorial(fid.a.numerator * n)
    raise DomainError(f"{fid.name} has no exact closed form")


def generate(fid: FamilyId, N: int = DEFAULT_N, prec: int = DEFAULT_PRECISION) -> MomentSequence:
    """Terms m_0..m_N of a family.

    Everything is exact except gamma-power with non-integer ``a``, whose
    terms Gamma(a n + 1) come from the log-gamma kernel at ``prec`` bits.
    """
    if not isinstance(fid, FamilyId):
        fid = family(fid)
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N}")
    if fid.tag is Family.GAMMA_POWER and fid.a.denominator != 1:
        terms, bounds = [mp.mpf(1)], [mp.mpf(0)]
        with mp.workprec(prec + GUARD_BITS):
            for n in range(1, N + 1):
                lg = log_gamma(fid.a * n + 1, prec + GUARD_BITS)
                terms.append(mp.exp(lg))
                # relative error of exp(L) equals the absolute error of L
                bounds.append(mp.ldexp(max(1, abs(lg)), -prec + 8))
        return MomentSequence(fid.name, tuple(terms), fid, tuple(bounds), prec)
    terms = tuple(Fraction(_exact_term(fid, n)) for n in range(N + 1))
    return MomentSequence(fid.name, terms, fid)


def _check_same_length(s: MomentSequence, t: MomentSequence) -> None:
    if len(s) != len(t):
        raise DomainError(f"length mismatch: {len(s)} vs {len(t)}")


def product(s: MomentSequence, t: MomentSequence) -> MomentSequence:
    """Termwise product, the moment sequence of an independent product X*Y."""
    _check_same_length(s, t)
    name = f"product({s.name},{t.name})"
    if s.exact and t.exact:
        return MomentSequence(name, tuple(a * b for a, b in zip(s.terms, t.terms)))
    prec = min(p for p in (s.precision, t.precision) if p is not None)
    with mp.workprec(prec + GUARD_BITS):
        terms = tuple(to_mpf(a) * to_mpf(b) for a, b in zip(s.terms, t.terms))
    bounds = tuple(
        _bound(s, n) + _bound(t, n) + _bound(s, n) * _bound(t, n) + mp.ldexp(1, -prec - 8)
        for n in range(len(s))
    )
    return MomentSequence(name, terms, None, bounds, prec)


def _bound(seq: MomentSequence, n: int):
    return mp.mpf(0) if seq.exact else seq.errbounds[n]


def scale(seq: MomentSequence, a) -> MomentSequence:
    """Terms a^n m_n, the moments of a*X."""
    a = to_rational(a)
    if a <= 0:
        raise DomainError(f"scale factor must be positive, got {a}")
    name = seq.name if a == 1 else f"scale({seq.name},{a})"
    fam = seq.family if a == 1 else None
    if seq.exact:
        return MomentSequence(name, tuple(a ** n * m for n, m in enumerate(seq.terms)), fam)
    with mp.workprec(seq.precision + GUARD_BITS):
        terms = tuple(to_mpf(a ** n) * m for n, m in enumerate(seq.terms))
    bounds = tuple(b + mp.ldexp(1, -seq.precision - 8) if n else b
                   for n, b in enumerate(seq.errbounds))
    return MomentSequence(name, terms, fam, bounds, seq.precision)


def ones(N: int) -> MomentSequence:
    """The sequence of all ones, moments of the point mass at 1."""
    return MomentSequence("ones", tuple(Fraction(1) for _ in range(N + 1)))


# -- real powers -------------------------------------------------------------


class _ivprec:
    """Temporarily set the precision of mpmath's interval context."""

    def __init__(self, prec: int):
        self.prec = prec

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.prec

    def __exit__(self, *exc):
        iv.prec = self.saved


def iv_endpoints(x):
    """Lower and upper endpoints of an interval as plain mpf values."""
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


def _base_interval(seq: MomentSequence, n: int):
    m = seq.terms[n]
    if seq.exact:
        return iv.mpf(m.numerator) / iv.mpf(m.denominator)
    e = seq.errbounds[n]
    # outward-rounded, so the box holds the truth whatever the interval precision
    return iv.mpf(m) * (1 + iv.mpf([-e, e]))


def power_intervals(seq: MomentSequence, c: Fraction, prec: int) -> list:
    """Enclosures of m_n^c as mpmath intervals computed at ``prec`` bits."""
    with _ivprec(prec):
        cc = iv.mpf(c.numerator) / iv.mpf(c.denominator)
        out = [iv.mpf(1)]
        for n in range(1, len(seq)):
            out.append(iv.exp(cc * iv.log(_base_interval(seq, n))))
        return out


@dataclass(frozen=True)
class PowerSequence:
    """Terms m_n^c with relative error bounds; ``exact_terms`` is set for integer c."""

    base: MomentSequence
    c: Fraction
    precision: int
    terms: tuple
    errbounds: tuple
    exact_terms: Optional[tuple] = None

    @property
    def name(self) -> str:
        return f"{self.base.name}^{self.c}"

    def __len__(self) -> int:
        return len(self.terms)


def _rounding_bound(t, m, prec: int):
    """Relative gap between the float ``t`` and the exact rational ``m``, rounded up."""
    man, exp = t.man_exp
    tq = Fraction(man) * Fraction(2) ** exp
    gap = abs(tq - Fraction(m)) / abs(tq)
    return mp.fdiv(gap.numerator, gap.denominator, prec=prec, rounding="u")


def power(seq: MomentSequence, c, prec: int = DEFAULT_PRECISION) -> PowerSequence:
    """The power sequence m_n^c with certified relative error bounds.

    A positive integer exponent on an exact sequence is evaluated exactly.
    Otherwise the terms are enclosed with interval arithmetic at
    ``prec + 8`` bits and stored as midpoint and relative radius.
    """
    c = to_rational(c)
    if c <= 0:
        raise DomainError(f"exponent must be positive, got {c}")
    if seq.exact and c.denominator == 1:
        exact = tuple(m ** c.numerator for m in seq.terms)
        with mp.workprec(prec):
            terms = tuple(to_mpf(m) for m in exact)
        bounds = tuple(_rounding_bound(t, m, prec) for t, m in zip(terms, exact))
        return PowerSequence(seq, c, prec, terms, bounds, exact)
    if not seq.exact and seq.precision < prec and seq.family is not None:
        seq = generate(seq.family, seq.N, prec)
    boxes = power_intervals(seq, c, prec + 8)
    terms, bounds = [], []
    for box in boxes:
        lo, hi = iv_endpoints(box)
        with mp.workprec(prec + 8):
            mid = (lo + hi) / 2
        # the midpoint is rounded, so measure the radius from it exactly and round up
        with mp.workprec(4 * (prec + 8)):
            rad = max(hi - mid, mid - lo)
        terms.append(mid)
        bounds.append(mp.fdiv(rad, mid, prec=prec + 8, rounding="u"))
    return PowerSequence(seq, c, prec, tuple(terms), tuple(bounds))


# -- factorization identities ------------------------------------------------

IDENTITIES = {
    "double-factorial-split": "D_n = n! * B_n / 2^n",
    "even-factorial-split": "(2n)! = B_n * (n!)^2",
    "k-factorial-split": "(kn)! = C(kn,n) C((k-1)n,n) ... C(2n,n) (n!)^k",
    "central-binomial-catalan": "B_n = (n+1) C_n",
    "fuss-binomial-catalan": "C_{k,n} (kn+1) = C((k+1)n, n)",
}


def verify_factorization(identity: str, N: int, k: Optional[int] = None) -> bool:
    """Check one of :data:`IDENTITIES` exactly for every n <= N."""
    if identity not in IDENTITIES:
        raise DomainError(f"unknown identity {identity!r}; known: {sorted(IDENTITIES)}")
    if identity in ("k-factorial-split", "fuss-binomial-catalan"):
        if k is None or k < 1:
            raise DomainError(f"{identity} needs a positive integer k")
    for n in range(N + 1):
        if identity == "double-factorial-split":
            ok = double_factorial(2 * n - 1) == factorial(n) * Fraction(binomial(2 * n, n), 2 ** n)
        elif identity == "even-factorial-split":
            ok = factorial(2 * n) == binomial(2 * n, n) * factorial(n) ** 2
        elif identity == "k-factorial-split":
            rhs = factorial(n) ** k * math.prod(binomial(j * n, n) for j in range(2, k + 1))
            ok = factorial(k * n) == rhs
        elif identity == "central-binomial-catalan":
            ok = binomial(2 * n, n) == (n + 1) * _exact_term(FamilyId(Family.CATALAN), n)
        else:
            ok = (_exact_term(FamilyId(Family.FUSS_CATALAN, k=k), n) * (k * n + 1)
                  == binomial((k + 1) * n, n))
        if not ok:
            return False
    return True


def sequence_rows(seq: MomentSequence | PowerSequence, digits: int = 40) -> list[dict]:
    """Rows for CSV export: (n, numerator, denominator) or (n, decimal, errbound)."""
    exact = seq.exact_terms if isinstance(seq, PowerSequence) else (seq.terms if seq.exact else None)
    if exact is not None:
        return [{"n": n, "numerator": str(Fraction(m).numerator),
                 "denominator": str(Fraction(m).denominator)} for n, m in enumerate(exact)]
    return [{"n": n, "decimal": mpmath.nstr(t, digits, strip_zeros=False),
             "errbound": mpmath.nstr(e, 6)}
            for n, (t, e) in enumerate(zip(seq.terms, seq.errbounds))]


def all_families(ks: Sequence[int] = (2, 3, 4), gamma_as: Sequence = (1, 2, 3)) -> list[FamilyId]:
    """Every family, parameterized over the given k and a values."""
    out = [family(t) for t in (Family.CATALAN, Family.CENTRAL_BINOMIAL,
                               Family.CENTRAL_BINOMIAL_SCALED, Family.DOUBLE_FACTORIAL,
                               Family.FACTORIAL, Family.EVEN_FACTORIAL)]
    for tag in (Family.FUSS_CATALAN, Family.FUSS_BINOMIAL, Family.K_FACTORIAL):
        for k in ks:
            fid = family(tag, k=k)
            if fid not in out:
                out.append(fid)
    out.extend(family(Family.GAMMA_POWER, a=a) for a in gamma_as)
    return out
