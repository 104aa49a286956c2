"""The acceptance suite behind ``verify-all``.

Each check returns a :class:`CheckResult` whose ``detail`` holds the
numbers that decided it.  Tolerances are fixed here, not configurable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp

from . import densities, divisibility, hankel, mellin, sequences
from .densities import DensityId, MODELS
from .divisibility import CARLEMAN_GRID, CarlemanVerdict, Determinacy
from .hankel import Verdict
from .sequences import Family, all_families, family

MELLIN_TOL = mp.mpf(10) ** -50
DENSITY_TOL = 1e-12
ANTU_TOL = 1e-10


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"

    def to_record(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _s(x, digits: int = 6) -> str:
    return mpmath.nstr(x, digits)


def catalan_hankel_identity() -> CheckResult:
    seq = sequences.generate(family(Family.CATALAN), 61)
    certs = hankel.certify_stieltjes_exact(seq, 30)
    bad = [(c.shifted, j) for c in certs for j, m in enumerate(c.minors, 1) if m != 1]
    return CheckResult("catalan-hankel-identity", not bad,
                       {"maxorder": 30, "minors_checked": sum(len(c.minors) for c in certs),
                        "non_unit": bad[:5]})


def stieltjes_certification(order: int = 14) -> CheckResult:
    failures = []
    fams = all_families()
    for fid in fams:
        seq = sequences.generate(fid, 2 * order + 1)
        for cert in hankel.certify_stieltjes_exact(seq, order):
            if cert.verdict is not Verdict.CERTIFIED_NONNEGATIVE:
                failures.append((fid.name, cert.shifted, cert.verdict.value))
    return CheckResult("stieltjes-certification", not failures,
                       {"order": order, "families": [f.name for f in fams], "failures": failures})


PROBE_GRID = ("0.1", "0.25", "0.5", "0.75", "0.9", "1.5")
PROBE_FAMILIES = (family(Family.CATALAN), family(Family.CENTRAL_BINOMIAL),
                  family(Family.DOUBLE_FACTORIAL), family(Family.FACTORIAL),
                  family(Family.FUSS_CATALAN, k=2))


def divisibility_probes(order: int = 10, pmax: int = 4096) -> CheckResult:
    failures, max_prec = [], 0
    for fid in PROBE_FAMILIES:
        report = hankel.divisibility_probe(fid, list(PROBE_GRID), order, 256, pmax)
        for row in report.rows:
            max_prec = max(max_prec, row["precision_bits"] or 0)
            if row["verdict"] != Verdict.CERTIFIED_NONNEGATIVE.value:
                failures.append((fid.name, row["c"], row["shifted"], row["verdict"]))
    return CheckResult("divisibility-probes", not failures,
                       {"order": order, "grid": list(PROBE_GRID), "pmax": pmax,
                        "max_precision_used": max_prec, "failures": failures})


def mellin_moment_consistency(N: int = 20, prec: int = 256) -> CheckResult:
    worst, checked, skipped = mp.mpf(0), 0, []
    for fid in all_families():
        for c in ("0.5", "1", "2"):
            try:
                mellin.check_range(fid, c)
            except mellin.MellinRangeError:
                skipped.append((fid.name, c))
                continue
            worst = max(worst, mellin.mellin_moment_consistency(fid, c, N, prec))
            checked += 1
    return CheckResult("mellin-moment-consistency", worst < MELLIN_TOL,
                       {"pairs": checked, "max_relative_residual": _s(worst),
                        "skipped_out_of_range": skipped})


S_GRID = tuple(Fraction(j, 2) for j in range(21))


def dual_form_agreement(prec: int = 256) -> CheckResult:
    worst_dual = mp.mpf(0)
    with mp.workprec(prec):
        for tag in mellin.DUAL_FORM_FAMILIES:
            fid = family(tag)
            for c in ("0.5", "1", "2"):
                for s in S_GRID:
                    a = mellin.mellin(fid, c, s, prec)
                    b = mellin.dual_form(fid, c, s, prec)
                    worst_dual = max(worst_dual, abs(a - b) / abs(b))
    worst_dup = max(mellin.duplication_check(x, prec) for x in S_GRID if x > 0)
    passed = worst_dual < MELLIN_TOL and worst_dup < MELLIN_TOL
    return CheckResult("dual-form-agreement", passed,
                       {"max_dual_residual": _s(worst_dual), "max_duplication_residual": _s(worst_dup)})


def density_moment_oracles(tol=DENSITY_TOL) -> CheckResult:
    limits = {DensityId.CATALAN: 20, DensityId.CENTRAL_BINOMIAL: 20, DensityId.SCALED_ARCSINE: 20,
              DensityId.CHI_SQUARE_1: 20, DensityId.FUSS_CATALAN_2: 12}
    worst = {}
    for mid, N in limits.items():
        m = MODELS[mid]
        exact = densities.exact_moments(m, N)
        with mp.workprec(densities.QUAD_PRECISION):
            w = mp.mpf(0)
            for n in range(N + 1):
                q = densities.moment_quadrature(m, n, tol).value
                e = mp.mpf(exact[n].numerator) / exact[n].denominator
                w = max(w, abs(q - e) / e)
        worst[mid.value] = w
    return CheckResult("density-moment-oracles", all(w < tol for w in worst.values()),
                       {k: _s(v) for k, v in worst.items()})


def series_identities() -> CheckResult:
    mgf = {w: densities.mgf_series_check(w, 40) for w in densities.MGF_CHECKS}
    uniform = densities.uniform_product_check(50)
    facts = {}
    for ident in sequences.IDENTITIES:
        if ident in ("k-factorial-split", "fuss-binomial-catalan"):
            facts[ident] = all(sequences.verify_factorization(ident, 100, k) for k in range(2, 7))
        else:
            facts[ident] = sequences.verify_factorization(ident, 100)
    passed = (all(v == 0 for v in mgf.values()) and uniform["exact"] and uniform["fuss_division"]
              and all(facts.values()))
    return CheckResult("series-identities", passed,
                       {"mgf_max_gap": {k: str(v) for k, v in mgf.items()},
                        "uniform_product_exact": uniform["exact"],
                        "fuss_division_law": uniform["fuss_division"],
                        "factorizations": facts})


def antu_identity() -> CheckResult:
    results = {}
    with mp.workprec(256):
        for label, div in (("pi/8", 8), ("pi/4", 4), ("pi/3", 3), ("pi/2", 2)):
            r = densities.antu_identity_check(mp.pi / div, 200)
            results[label] = (r.residual, r.method)
    return CheckResult("antu-identity", all(r < ANTU_TOL for r, _ in results.values()),
                       {k: {"residual": _s(r), "method": m} for k, (r, m) in results.items()})


def bernstein_machinery() -> CheckResult:
    products = {}
    for name in divisibility.FACTORIZATIONS[:4]:
        products[name] = divisibility.bernstein_product_check(name, 200)
    for name in divisibility.FACTORIZATIONS[4:]:
        for k in range(2, 7):
            products[f"{name}(k={k})"] = divisibility.bernstein_product_check(name, 100, k)
    hs = divisibility.all_h_functions()
    cm_fail = [(h.name, h.k, h.ell) for h in hs if not divisibility.complete_monotonicity_check(h, 8)]
    return CheckResult("bernstein-machinery", all(products.values()) and not cm_fail,
                       {"products": products, "h_functions": len(hs), "monotonicity_failures": cm_fail})


_EXPECTED_BOUNDARY = {
    family(Family.FACTORIAL): Fraction(2),
    family(Family.DOUBLE_FACTORIAL): Fraction(2),
    family(Family.EVEN_FACTORIAL): Fraction(1),
    family(Family.K_FACTORIAL, k=3): Fraction(2, 3),
    family(Family.K_FACTORIAL, k=4): Fraction(1, 2),
    family(Family.K_FACTORIAL, k=5): Fraction(2, 5),
}
_ALWAYS_DET = (family(Family.CATALAN), family(Family.CENTRAL_BINOMIAL),
               family(Family.CENTRAL_BINOMIAL_SCALED), family(Family.FUSS_CATALAN, k=2),
               family(Family.FUSS_CATALAN, k=3), family(Family.FUSS_BINOMIAL, k=2),
               family(Family.FUSS_BINOMIAL, k=3))


def determinacy_boundary(N: int = 64) -> CheckResult:
    table_errors = []
    probes = [Fraction(j, 20) for j in range(1, 121)] + [Fraction(7, 1), Fraction(73, 10)]
    for fid in _ALWAYS_DET:
        if any(divisibility.determinacy_classify(fid, c).verdict is not Determinacy.DET for c in probes):
            table_errors.append(fid.name)
    for fid, edge in _EXPECTED_BOUNDARY.items():
        for c in probes + [edge, edge * Fraction(101, 100)]:
            got = divisibility.determinacy_classify(fid, c).verdict
            want = Determinacy.DET if c <= edge else Determinacy.INDET
            if got is not want:
                table_errors.append((fid.name, str(c), got.value))
    disagreements, band = [], []
    for fid in _ALWAYS_DET + tuple(_EXPECTED_BOUNDARY):
        edge = divisibility.boundary(fid)
        for c in CARLEMAN_GRID:
            d = divisibility.carleman_diagnose(fid, c, N)
            if d.verdict is CarlemanVerdict.BOUNDARY:
                band.append((fid.name, str(c), round(d.rho_hat, 4)))
                # the margin band may only swallow points near the boundary
                if edge is None or abs(c / edge - 1) > Fraction(1, 10):
                    disagreements.append((fid.name, str(c), "boundary-band far from edge"))
            elif not d.agrees:
                disagreements.append((fid.name, str(c), d.verdict.value, d.theorem_verdict.verdict.value))
    return CheckResult("determinacy-boundary", not table_errors and not disagreements,
                       {"table_errors": table_errors, "carleman_disagreements": disagreements,
                        "inside_margin_band": band})


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "catalan-hankel-identity": catalan_hankel_identity,
    "stieltjes-certification": stieltjes_certification,
    "divisibility-probes": divisibility_probes,
    "mellin-moment-consistency": mellin_moment_consistency,
    "dual-form-agreement": dual_form_agreement,
    "density-moment-oracles": density_moment_oracles,
    "series-identities": series_identities,
    "antu-identity": antu_identity,
    "bernstein-machinery": bernstein_machinery,
    "determinacy-boundary": determinacy_boundary,
}


def run_all(names=None) -> list[CheckResult]:
    return [CHECKS[n]() for n in (names or CHECKS)]
