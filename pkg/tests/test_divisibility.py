from fractions import Fraction

import pytest
import sympy as sp

from catalan_moments.divisibility import (CARLEMAN_GRID, CARLEMAN_MARGIN, FACTORIZATIONS,
                                          CarlemanVerdict, Determinacy, all_h_functions,
                                          bernstein_product_check, boundary, carleman_diagnose,
                                          complete_monotonicity_check, determinacy_classify,
                                          h_functions, log_grid, propagate_indeterminacy,
                                          radical_power, Classification)
from catalan_moments.exactcore import DomainError
from catalan_moments.sequences import Family, all_families, family


@pytest.mark.parametrize("name", FACTORIZATIONS[:4])
def test_products_rebuild_families(name):
    assert bernstein_product_check(name, 200)


@pytest.mark.parametrize("name", FACTORIZATIONS[4:])
@pytest.mark.parametrize("k", range(2, 7))
def test_fuss_products(name, k):
    assert bernstein_product_check(name, 100, k)


def test_fuss_needs_k():
    with pytest.raises(DomainError):
        h_functions("fuss-catalan")
    with pytest.raises(DomainError):
        h_functions("nope")


def test_radical_power():
    assert radical_power(3, 6) == 16
    with pytest.raises(DomainError):
        radical_power(3, 2)


def test_exact_derivatives_match_sympy():
    x = sp.symbols("x", positive=True)
    for h in all_h_functions():
        if h.kind == "affine":
            f = h.p * (x + sp.Rational(h.shift.numerator, h.shift.denominator)) + h.q
        else:
            y = x + sp.Rational(h.shift.numerator, h.shift.denominator)
            f = sp.Rational(h.p.numerator, h.p.denominator) - sp.Rational(h.q.numerator, h.q.denominator) / (
                y + sp.Rational(h.r.numerator, h.r.denominator))
        for j in (1, 2, 5):
            dj = sp.diff(f, x, j)
            for pt in (Fraction(1, 7), Fraction(3), Fraction(50)):
                want = dj.subs(x, sp.Rational(pt.numerator, pt.denominator))
                assert sp.Rational(want) == sp.Rational(h.f_derivative(j, pt).numerator,
                                                        h.f_derivative(j, pt).denominator)


def test_every_factor_is_completely_monotone():
    for h in all_h_functions():
        assert complete_monotonicity_check(h, 8), (h.name, h.k, h.ell)


def test_monotonicity_detects_wrong_sign():
    # q < 0 flips every derivative sign
    bad = h_functions("catalan")[0].__class__("bad", "mobius", Fraction(1), Fraction(-1), Fraction(1))
    assert not complete_monotonicity_check(bad, 4)


def test_pole_inside_domain_rejected():
    h = h_functions("catalan")[0].__class__("pole", "mobius", Fraction(1), Fraction(1), Fraction(-2))
    with pytest.raises(DomainError):
        complete_monotonicity_check(h, 2)


def test_log_grid():
    g = log_grid()
    assert len(g) == 50 and g[0] == Fraction(1, 100) and g[-1] == 100


@pytest.mark.parametrize("tag,c,want", [
    ("double-factorial", "2.5", Determinacy.INDET),
    ("double-factorial", "2", Determinacy.DET),
    ("factorial", "2", Determinacy.DET),
    ("factorial", "2.01", Determinacy.INDET),
    ("even-factorial", "1", Determinacy.DET),
    ("even-factorial", "1.1", Determinacy.INDET),
    ("catalan", "100", Determinacy.DET),
])
def test_classifier_table(tag, c, want):
    assert determinacy_classify(family(tag), c).verdict is want


@pytest.mark.parametrize("k", range(3, 7))
def test_k_factorial_boundary(k):
    fid = family("k-factorial", k=k)
    assert determinacy_classify(fid, Fraction(2, k)).verdict is Determinacy.DET
    assert determinacy_classify(fid, Fraction(2, k) * Fraction(101, 100)).verdict is Determinacy.INDET


def test_gamma_power_is_conjectural():
    fid = family("gamma-power", a="1/2")
    assert determinacy_classify(fid, 4).verdict is Determinacy.DET_CONJECTURED
    assert determinacy_classify(fid, 5).verdict is Determinacy.INDET_CONJECTURED


@pytest.mark.parametrize("fid", all_families(), ids=lambda f: f.name)
def test_classifier_is_monotone_in_c(fid):
    # once indeterminate, larger exponents stay indeterminate
    verdicts = [determinacy_classify(fid, Fraction(j, 10)).determinate for j in range(1, 80)]
    assert verdicts == sorted(verdicts, reverse=True)


def test_propagation_rule():
    indet = Classification(Determinacy.INDET, "x")
    assert propagate_indeterminacy(indet).verdict is Determinacy.INDET
    assert propagate_indeterminacy(indet, other_positive=False) is None
    assert propagate_indeterminacy(Classification(Determinacy.DET, "x")) is None


def test_classifier_domain():
    with pytest.raises(DomainError):
        determinacy_classify(family("catalan"), 0)


@pytest.mark.parametrize("tag", ["factorial", "double-factorial", "catalan"])
def test_rho_scales_linearly_in_c(tag):
    fid = family(tag)
    r1 = carleman_diagnose(fid, 1).rho_hat
    for c in (Fraction(1, 2), Fraction(3, 2), Fraction(3)):
        assert abs(carleman_diagnose(fid, c).rho_hat / r1 / float(c) - 1) < 0.02


def test_factorial_rho_near_half_c():
    # m_n^(-c/2n) behaves like (n/e)^(-c/2)
    assert abs(carleman_diagnose(family("factorial"), 1, 64).rho_hat + 0.5) < 0.05


@pytest.mark.parametrize("fid", all_families(), ids=lambda f: f.name)
def test_heuristic_agrees_off_the_margin(fid):
    edge = boundary(fid)
    for c in CARLEMAN_GRID:
        d = carleman_diagnose(fid, c)
        if d.verdict is CarlemanVerdict.BOUNDARY:
            assert abs(d.rho_hat + 1) < CARLEMAN_MARGIN
            assert edge is not None and abs(c / edge - 1) <= Fraction(1, 10)
        else:
            assert d.agrees, (fid.name, c, d.rho_hat)


def test_partial_sums_increase():
    d = carleman_diagnose(family("catalan"), 1, 32)
    assert all(b > a for a, b in zip(d.partial_sums, d.partial_sums[1:]))
    assert d.to_record()["verdict"] == d.verdict.value


def test_carleman_domain():
    with pytest.raises(DomainError):
        carleman_diagnose(family("catalan"), 1, 8)
