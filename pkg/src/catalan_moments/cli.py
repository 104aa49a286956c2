"""Command-line front end.

Every subcommand writes one report, JSON (sorted keys) by default or CSV
with a header row, to stdout or ``--output``.  Exit status is 0 on
success, 1 when a computation fails or a certificate stays inconclusive,
and 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional

import mpmath

from . import acceptance, densities, divisibility, hankel, mellin, sequences
from .exactcore import DomainError, to_rational
from .quadrature import QuadratureError
from .sequences import DEFAULT_N, DEFAULT_PRECISION, Family

PRECISION_ENV = "CATALAN_MOMENTS_PRECISION"
DEFAULT_TOL = 1e-12
DEFAULT_C_GRID = "0.1,0.25,0.5,0.75,0.9,1.5"


class Failure(Exception):
    """A computation finished but its result counts as a failure; ``report`` is still emitted."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


# -- argument types ------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_rational(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return q


def _rational_list(text: str) -> list[Fraction]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return [_positive_rational(t.strip()) for t in items]


def _s_grid(text: str) -> list[Fraction]:
    """Either a comma list or ``start:stop:step`` (stop included)."""
    if ":" not in text:
        vals = [_rational(t.strip()) for t in text.split(",") if t.strip()]
    else:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid ranges look like start:stop:step")
        start, stop, step = (_rational(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("grid ranges need step > 0 and stop >= start")
        vals, x = [], start
        while x <= stop:
            vals.append(x)
            x += step
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("grid must be non-empty and nonnegative")
    return vals


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _precision(text: str) -> int:
    v = _nonneg_int(text)
    if v < 53:
        raise argparse.ArgumentTypeError("precision must be at least 53 bits")
    return v


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return _precision(raw)
    except argparse.ArgumentTypeError as exc:
        raise SystemExit(f"{PRECISION_ENV}: {exc}")


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--precision", type=_precision, default=None,
                        help=f"working precision in bits (default {DEFAULT_PRECISION}, "
                             f"or ${PRECISION_ENV})")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", required=True, choices=[f.value for f in Family])
    fam.add_argument("--k", type=int, help="order of the Fuss and k-factorial families")
    fam.add_argument("--a", type=_positive_rational, help="parameter of gamma-power")

    parser = argparse.ArgumentParser(
        prog="catalan-moments",
        description="Exact and certified computations on Catalan-type Stieltjes moment sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common, fam], help="moment sequence table")
    p.add_argument("--n", type=_nonneg_int, default=DEFAULT_N, help="last index")
    p.add_argument("--c", type=_positive_rational, help="raise every term to this power")

    p = sub.add_parser("hankel", parents=[common, fam], help="Hankel sign certificates")
    p.add_argument("--order", type=_nonneg_int, default=10)
    p.add_argument("--c", type=_positive_rational, help="certify the powered sequence instead")
    p.add_argument("--pmax", type=_precision, default=hankel.DEFAULT_PMAX)

    p = sub.add_parser("probe", parents=[common, fam], help="power-sequence probes over a c grid")
    p.add_argument("--c-grid", type=_rational_list, default=_rational_list(DEFAULT_C_GRID))
    p.add_argument("--order", type=_nonneg_int, default=10)
    p.add_argument("--pmax", type=_precision, default=hankel.DEFAULT_PMAX)

    p = sub.add_parser("mellin", parents=[common, fam], help="Mellin transform table")
    p.add_argument("--c", type=_positive_rational, default=Fraction(1))
    p.add_argument("--s-grid", type=_s_grid, default=_s_grid("0:10:1/2"),
                   help="comma list or start:stop:step")
    p.add_argument("--n", type=_nonneg_int, default=DEFAULT_N,
                   help="check the transform against moments n <= N")
    p.add_argument("--uncertified", action="store_true",
                   help="evaluate past the determinacy boundary")

    p = sub.add_parser("density", parents=[common], help="quadrature moments against exact moments")
    p.add_argument("--model", required=True, choices=[m.value for m in densities.DensityId])
    p.add_argument("--n", type=_nonneg_int, default=DEFAULT_N)
    p.add_argument("--grid-points", type=_nonneg_int, default=0,
                   help="also emit an (x, f(x)) grid with this many points")
    p.add_argument("--plot-data", help="write the (x, f(x)) grid as CSV to this path")
    p.add_argument("--figure", help="render the density grid to this PNG path")

    p = sub.add_parser("carleman", parents=[common, fam], help="Carleman series diagnostic")
    p.add_argument("--c", type=_positive_rational, required=True)
    p.add_argument("--n", type=_nonneg_int, default=64)
    p.add_argument("--figure", help="render the partial sums to this PNG path")

    p = sub.add_parser("bernstein", parents=[common], help="factorization and monotonicity report")
    p.add_argument("--name", required=True, choices=divisibility.FACTORIZATIONS)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=_nonneg_int, default=DEFAULT_N)
    p.add_argument("--derivatives", type=_nonneg_int, default=8)

    p = sub.add_parser("classify", parents=[common, fam], help="determinacy verdict")
    p.add_argument("--c", type=_positive_rational, required=True)

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--check", action="append", choices=list(acceptance.CHECKS),
                   help="run only this check (repeatable)")
    return parser


# -- subcommands ----------------------------------------------------------------


def _family(args):
    return sequences.family(args.family, k=args.k, a=args.a)


def _head(args, fid) -> dict:
    return {"command": args.command, "family": fid.tag.value, "params": fid.params}


def _minor_record(m) -> dict:
    if isinstance(m, Fraction):
        return {"numerator": str(m.numerator), "denominator": str(m.denominator)}
    value, bound = m
    return {"value": mpmath.nstr(value, 30), "errbound": mpmath.nstr(bound, 6)}


def cmd_gen(args, prec):
    fid = _family(args)
    seq = sequences.generate(fid, args.n, prec)
    if args.c is not None:
        seq = sequences.power(seq, args.c, prec)
    rows = sequences.sequence_rows(seq)
    report = _head(args, fid)
    report.update({"c": str(args.c or 1), "N": args.n, "precision_bits": prec, "rows": rows})
    return report, rows


def cmd_hankel(args, prec):
    fid = _family(args)
    base = sequences.generate(fid, 2 * args.order + 1, prec)
    if args.c is None and base.exact:
        certs = hankel.certify_stieltjes_exact(base, args.order)
    else:
        pseq = sequences.power(base, args.c or 1, prec)
        certs = hankel.certify_stieltjes_power(pseq, args.order, args.pmax)
    records, rows = [], []
    for cert in certs:
        rec = cert.to_record()
        rec["minors"] = [_minor_record(m) for m in cert.minors]
        records.append(rec)
        for j, m in enumerate(rec["minors"], 1):
            rows.append({"shifted": cert.shifted, "j": j, **m, "verdict": cert.verdict.value})
    report = _head(args, fid)
    report.update({"c": str(args.c or 1), "order": args.order, "certificates": records})
    if any(c.verdict is hankel.Verdict.INCONCLUSIVE for c in certs):
        raise Failure(f"sign undecided at Pmax={args.pmax}", report)
    return report, rows


def cmd_probe(args, prec):
    fid = _family(args)
    probe = hankel.divisibility_probe(fid, args.c_grid, args.order, prec, args.pmax)
    report = {"command": args.command, **probe.to_record()}
    rows = [{k: r[k] for k in ("c", "shifted", "verdict", "min_minor", "negative_index", "precision_bits")}
            for r in probe.rows]
    if any(r["verdict"] == hankel.Verdict.INCONCLUSIVE.value for r in probe.rows):
        raise Failure(f"some probes stayed inconclusive at Pmax={args.pmax}", report)
    return report, rows


def cmd_mellin(args, prec):
    fid = _family(args)
    form = mellin.mellin_form(fid, args.c, prec, args.uncertified)
    rows = mellin.tabulate(fid, args.c, args.s_grid, prec, args.uncertified)
    residual = mellin.mellin_moment_consistency(fid, args.c, args.n, prec, args.uncertified)
    report = _head(args, fid)
    report.update({"c": str(form.c), "precision_bits": prec, "conjectural": form.conjectural,
                   "uncertified": args.uncertified, "consistency_N": args.n,
                   "consistency_residual": mpmath.nstr(residual, 6), "rows": rows})
    return report, rows


def _write_csv(rows: list[dict], stream) -> None:
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_density(args, prec):
    m = densities.model(args.model)
    qprec = max(densities.QUAD_PRECISION, prec // 2)
    rows = densities.moment_table(m, args.n, args.tol, qprec)
    report = {"command": args.command, "model": m.id.value, "N": args.n, "tol": args.tol,
              "precision_bits": qprec, "rows": rows}
    points = args.grid_points or (200 if (args.plot_data or args.figure) else 0)
    if points:
        grid = densities.density_grid(m, points)
        if args.plot_data:
            with open(args.plot_data, "w", encoding="utf-8", newline="") as fh:
                _write_csv(grid, fh)
            report["plot_data"] = args.plot_data
        else:
            report["grid"] = grid
        if args.figure:
            from .plotting import density_figure
            report["figure"] = density_figure(grid, m.id.value, args.figure)
    return report, rows


def cmd_carleman(args, prec):
    fid = _family(args)
    diag = divisibility.carleman_diagnose(fid, args.c, args.n, prec)
    report = {"command": args.command, **diag.to_record()}
    report["agrees"] = diag.agrees
    report["partial_sums"] = [mpmath.nstr(s, 20) for s in diag.partial_sums]
    if args.figure:
        from .plotting import carleman_figure
        report["figure"] = carleman_figure(diag.partial_sums, diag.rho_hat,
                                           f"{fid.name}, c={diag.c}", args.figure)
    rows = [{"n": n, "partial_sum": s} for n, s in enumerate(report["partial_sums"], 1)]
    return report, rows


def cmd_bernstein(args, prec):
    hs = divisibility.h_functions(args.name, args.k)
    product_ok = divisibility.bernstein_product_check(args.name, max(args.n, 1), args.k)
    rows = []
    for h in hs:
        rows.append({"name": h.name, "k": h.k, "ell": h.ell, "kind": h.kind, "p": str(h.p),
                     "q": str(h.q), "r": str(h.r), "shift": str(h.shift),
                     "completely_monotone": divisibility.complete_monotonicity_check(h, args.derivatives)})
    report = {"command": args.command, "name": args.name, "k": args.k, "N": max(args.n, 1),
              "derivatives": args.derivatives, "product_check": product_ok, "h_functions": rows}
    if not product_ok or not all(r["completely_monotone"] for r in rows):
        raise Failure("factorization or monotonicity check failed", report)
    return report, rows


def cmd_classify(args, prec):
    fid = _family(args)
    cls = divisibility.determinacy_classify(fid, args.c)
    report = _head(args, fid)
    report.update({"c": str(args.c), "verdict": cls.verdict.value, "citation": cls.citation})
    return report, [{"family": fid.name, "c": str(args.c), "verdict": cls.verdict.value,
                     "citation": cls.citation}]


def cmd_verify_all(args, prec):
    results = acceptance.run_all(args.check)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"command": args.command, "passed": all(r.passed for r in results),
              "checks": [r.to_record() for r in results]}
    rows = [{"name": r.name, "passed": r.passed} for r in results]
    if not report["passed"]:
        raise Failure("acceptance checks failed", report)
    return report, rows


COMMANDS = {
    "gen": cmd_gen, "hankel": cmd_hankel, "probe": cmd_probe, "mellin": cmd_mellin,
    "density": cmd_density, "carleman": cmd_carleman, "bernstein": cmd_bernstein,
    "classify": cmd_classify, "verify-all": cmd_verify_all,
}


# -- output ---------------------------------------------------------------------


def render(report: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        _write_csv(rows, buf)
        return buf.getvalue()
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    prec = args.precision or _default_precision()
    try:
        report, rows = COMMANDS[args.command](args, prec)
    except Failure as exc:
        report = dict(exc.report)
        report["error"] = {"type": "Failure", "message": str(exc)}
        _emit(render(report, [], "json"), args.output)
        return 1
    except (DomainError, QuadratureError, ArithmeticError) as exc:
        report = {"command": args.command, "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(render(report, [], "json"), args.output)
        return 1
    _emit(render(report, rows, args.format), args.output)
    return 0


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
