"""Stieltjes moment-sequence certification through Hankel minors.

A sequence is a Stieltjes moment sequence iff every determinant of both
``(m_{i+j})`` and ``(m_{i+j+1})`` is nonnegative.  For exact sequences the
leading minors are computed exactly; for real powers they are enclosed with
interval arithmetic and the precision is doubled until every sign is settled.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import iv, mp

from .exactcore import DomainError, ExactMatrix, leading_principal_minors
from .sequences import (
    DEFAULT_PRECISION,
    FamilyId,
    Family,
    MomentSequence,
    PowerSequence,
    _ivprec,
    generate,
    iv_endpoints,
    power,
    power_intervals,
)

DEFAULT_PMAX = 4096
SAFETY_FACTOR = 4


class Verdict(str, enum.Enum):
    CERTIFIED_NONNEGATIVE = "CertifiedNonnegative"
    NEGATIVE_MINOR_FOUND = "NegativeMinorFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class HankelCertificate:
    """Leading minors of one Hankel matrix and the resulting sign verdict.

    ``minors[j-1]`` is the minor of order ``j``.  Exact certificates hold
    Fractions; the others hold ``(value, bound)`` pairs where the sign is
    certified once ``|value| > bound``.  ``negative_index`` is the order of
    the first certified-negative minor.
    """

    sequence: str
    order: int
    shifted: bool
    minors: tuple
    verdict: Verdict
    negative_index: Optional[int] = None
    precision: Optional[int] = None
    family: Optional[FamilyId] = None
    c: Optional[Fraction] = None

    @property
    def exact(self) -> bool:
        return self.precision is None

    @property
    def min_minor(self):
        if self.exact:
            return min(self.minors)
        return min(v for v, _ in self.minors)

    def to_record(self, digits: int = 30) -> dict:
        m = self.min_minor
        if isinstance(m, Fraction):
            min_text = str(m.numerator) if m.denominator == 1 else str(m)
        else:
            min_text = mpmath.nstr(m, digits)
        fam = self.family
        return {
            "family": fam.tag.value if fam else self.sequence,
            "params": fam.params if fam else {},
            "c": str(self.c) if self.c is not None else "1",
            "order": self.order,
            "shifted": self.shifted,
            "verdict": self.verdict.value,
            "negative_index": self.negative_index,
            "min_minor": min_text,
            "precision_bits": self.precision,
        }


def _needed_terms(order: int, shifted: bool) -> int:
    return 2 * order + 1 + int(shifted)


def hankel_matrix(seq: MomentSequence, order: int, shifted: bool = False) -> ExactMatrix:
    """The ``(order+1)``-square matrix with entries m_{i+j} (or m_{i+j+1} when shifted)."""
    if order < 0:
        raise DomainError(f"order must be nonnegative, got {order}")
    if not seq.exact:
        raise DomainError(f"{seq.name} is inexact; build intervals with the power path")
    need = _needed_terms(order, shifted)
    if len(seq) < need:
        raise DomainError(f"order {order} needs {need} terms, {seq.name} has {len(seq)}")
    s = int(shifted)
    return ExactMatrix([[seq[i + j + s] for j in range(order + 1)] for i in range(order + 1)])


def _exact_certificate(seq, order, shifted, fam=None, c=None) -> HankelCertificate:
    minors = leading_principal_minors(hankel_matrix(seq, order, shifted))
    neg = next((j for j, m in enumerate(minors, 1) if m < 0), None)
    verdict = Verdict.CERTIFIED_NONNEGATIVE if neg is None else Verdict.NEGATIVE_MINOR_FOUND
    return HankelCertificate(seq.name, order, shifted, tuple(minors), verdict, neg,
                             family=fam, c=c)


def certify_stieltjes_exact(seq: MomentSequence, maxorder: int):
    """Exact certificates for ``Delta_maxorder`` and its shifted companion."""
    if not seq.exact:
        raise DomainError(f"{seq.name} is inexact; use certify_stieltjes_power")
    return (_exact_certificate(seq, maxorder, False, seq.family),
            _exact_certificate(seq, maxorder, True, seq.family))


def interval_leading_minors(entries: Sequence[Sequence]) -> list:
    """Leading minors of an interval matrix via elimination without pivoting.

    The k-th minor is the product of the first k pivots.  Must be called
    with the interval precision already set.
    """
    a = [list(row) for row in entries]
    n = len(a)
    minors = []
    running = iv.mpf(1)
    for k in range(n):
        pivot = a[k][k]
        running = running * pivot
        minors.append(running)
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return minors


def _classify_boxes(boxes):
    pairs = []
    status = []
    for box in boxes:
        lo, hi = iv_endpoints(box)
        if not (mpmath.isfinite(lo) and mpmath.isfinite(hi)):
            pairs.append((mp.nan, mp.inf))
            status.append(0)
            continue
        mid = (lo + hi) / 2
        bound = SAFETY_FACTOR * (hi - lo) / 2
        pairs.append((mid, bound))
        status.append(1 if mid > bound else (-1 if mid < -bound else 0))
    return pairs, status


def _power_certificate(pseq: PowerSequence, order: int, shifted: bool, pmax: int):
    base = pseq.base
    need = _needed_terms(order, shifted)
    if len(base) < need:
        raise DomainError(f"order {order} needs {need} terms, {base.name} has {len(base)}")
    s = int(shifted)
    prec = max(pseq.precision, 53)
    while True:
        if not base.exact and base.family is not None and base.precision < prec:
            base = generate(base.family, base.N, prec)
        with _ivprec(prec):
            t = power_intervals(base, pseq.c, prec)
            entries = [[t[i + j + s] for j in range(order + 1)] for i in range(order + 1)]
            boxes = interval_leading_minors(entries)
        with mp.workprec(prec):
            pairs, status = _classify_boxes(boxes)
        neg = next((j for j, st in enumerate(status, 1) if st < 0), None)
        if neg is not None:
            verdict = Verdict.NEGATIVE_MINOR_FOUND
        elif all(st > 0 for st in status):
            verdict = Verdict.CERTIFIED_NONNEGATIVE
        elif prec >= pmax:
            verdict = Verdict.INCONCLUSIVE
        else:
            prec = min(2 * prec, pmax)
            continue
        return HankelCertificate(pseq.name, order, shifted, tuple(pairs), verdict, neg,
                                 precision=prec, family=base.family, c=pseq.c)


def certify_stieltjes_power(pseq: PowerSequence, maxorder: int, pmax: int = DEFAULT_PMAX):
    """Certificates for the power sequence, unshifted and shifted.

    Minors are enclosed in intervals; a sign counts as certified when the
    midpoint exceeds ``SAFETY_FACTOR`` times the radius.  Precision starts at
    the sequence's and doubles up to ``pmax`` while any sign is open.  An
    integer exponent on an exact base falls back to exact minors.
    """
    if pseq.exact_terms is not None:
        exact = MomentSequence(pseq.name, pseq.exact_terms, None)
        return (_exact_certificate(exact, maxorder, False, pseq.base.family, pseq.c),
                _exact_certificate(exact, maxorder, True, pseq.base.family, pseq.c))
    return (_power_certificate(pseq, maxorder, False, pmax),
            _power_certificate(pseq, maxorder, True, pmax))


@dataclass
class ProbeReport:
    """Per-c certificates from :func:`divisibility_probe`.

    ``supported`` means every sampled exponent certified at every order up to
    ``maxorder``; it is evidence for infinite divisibility, never a proof.
    """

    family: FamilyId
    maxorder: int
    rows: list = field(default_factory=list)
    conjectural: bool = False

    @property
    def supported(self) -> bool:
        return all(r["verdict"] == Verdict.CERTIFIED_NONNEGATIVE.value for r in self.rows)

    def to_record(self) -> dict:
        return {
            "family": self.family.tag.value,
            "params": self.family.params,
            "maxorder": self.maxorder,
            "conjectural": self.conjectural,
            "supported": self.supported,
            "scope": f"supported at sampled c, order <= {self.maxorder}",
            "rows": self.rows,
        }


def divisibility_probe(fid: FamilyId, c_grid, maxorder: int,
                       prec: int = DEFAULT_PRECISION, pmax: int = DEFAULT_PMAX) -> ProbeReport:
    if not c_grid:
        raise DomainError("c_grid must be non-empty")
    base = generate(fid, 2 * maxorder + 1, prec)
    report = ProbeReport(fid, maxorder, conjectural=fid.tag is Family.GAMMA_POWER)
    rows = []
    for c in c_grid:
        for cert in certify_stieltjes_power(power(base, c, prec), maxorder, pmax):
            rec = cert.to_record()
            if cert.precision is None:
                rec["precision_bits"] = prec
            rows.append(rec)
    rows.sort(key=lambda r: (Fraction(r["c"]), r["shifted"]))
    report.rows = rows
    return report
