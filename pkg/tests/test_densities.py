from fractions import Fraction

import pytest
from mpmath import mp

from catalan_moments.densities import (MGF_CHECKS, MODELS, DensityId, antu_identity_check, bessel_I,
                                       density_eval, density_grid, exact_moments,
                                       generating_function_check, mgf_series_check, moment_quadrature,
                                       moment_table, symmetry_square_check, uniform_product_check)
from catalan_moments.exactcore import DomainError
from catalan_moments.quadrature import QuadratureError, periodic_trapezoid, tanh_sinh


def test_spot_values():
    with mp.workprec(128):
        assert abs(density_eval(MODELS[DensityId.CATALAN], 2) - 1 / (2 * mp.pi)) < 1e-30
        assert abs(density_eval(MODELS[DensityId.CENTRAL_BINOMIAL], 2) - 1 / (2 * mp.pi)) < 1e-30
        assert abs(density_eval(MODELS[DensityId.SYMMETRIC_ARCSINE], 0) - 1 / (2 * mp.pi)) < 1e-30


@pytest.mark.parametrize("mid", list(DensityId))
def test_densities_integrate_to_one_against_mpmath_quad(mid):
    m = MODELS[mid]
    lo, hi = m.support
    with mp.workprec(80):
        # nodes that round onto a singular endpoint carry no weight
        f = lambda x: density_eval(m, x, mp.prec) if m.contains(x) else 0  # noqa: E731
        if hi is None:
            total = mp.quad(f, [0, 1, mp.inf])
        else:
            total = mp.quad(f, [lo, (lo + hi) / 2, hi])
    assert abs(total - 1) < 1e-8


@pytest.mark.parametrize("mid,N", [(DensityId.CATALAN, 20), (DensityId.CENTRAL_BINOMIAL, 20),
                                   (DensityId.SCALED_ARCSINE, 20), (DensityId.CHI_SQUARE_1, 20),
                                   (DensityId.FUSS_CATALAN_2, 12), (DensityId.SYMMETRIC_ARCSINE, 12)])
def test_quadrature_moments(mid, N):
    rows = moment_table(MODELS[mid], N)
    assert all(float(r["residual"]) < 1e-12 for r in rows)


def test_odd_symmetric_moments_vanish():
    assert exact_moments(MODELS[DensityId.SYMMETRIC_ARCSINE], 5) == [1, 0, 2, 0, 6, 0]
    out = symmetry_square_check(8)
    assert out["passed"]


def test_outside_support():
    with pytest.raises(DomainError):
        density_eval(MODELS[DensityId.CATALAN], 5)
    with pytest.raises(DomainError):
        density_eval(MODELS[DensityId.CHI_SQUARE_1], 0)


def test_grid():
    g = density_grid(MODELS[DensityId.FUSS_CATALAN_2], 10)
    assert len(g) == 10 and all(float(r["density"]) > 0 for r in g)


def test_trapezoid_and_tanh_sinh_oracles():
    with mp.workprec(100):
        r = periodic_trapezoid(lambda t: mp.cos(t) ** 2, 1e-20)
        assert abs(r.value - mp.pi / 2) < 1e-25
        r = tanh_sinh(lambda x, dl, dr: 1 / mp.sqrt(dl * dr), 0, 1, 1e-20)
        assert abs(r.value - mp.pi) < 1e-20


def test_quadrature_budget():
    with mp.workprec(60):
        with pytest.raises(QuadratureError) as exc:
            tanh_sinh(lambda x, dl, dr: mp.sin(1 / dl), 0, 1, 1e-15, max_level=3)
    assert exc.value.best.nodes > 0


@pytest.mark.parametrize("which", MGF_CHECKS)
def test_mgf_series_exact(which):
    assert mgf_series_check(which, 40) == 0


def test_bessel_against_mpmath():
    with mp.workprec(200):
        for order in (0, 1):
            for t in ("0.5", "2", "9"):
                assert abs(bessel_I(order, t) - mp.besseli(order, mp.mpf(t))) < mp.mpf(10) ** -50


def test_uniform_product():
    out = uniform_product_check(50)
    assert out["exact"] and out["fuss_division"]
    assert out["quadrature_residual"] < 1e-12


def test_generating_function_bound():
    r = generating_function_check(Fraction(1, 5), 60)
    assert r.within_bound
    with pytest.raises(DomainError):
        generating_function_check(Fraction(1, 3), 10)


@pytest.mark.parametrize("div", [8, 4, 3, 2])
def test_sine_identity(div):
    with mp.workprec(256):
        assert antu_identity_check(mp.pi / div, 200).residual < 1e-10


def test_catalan_gf_edges():
    from catalan_moments.densities import catalan_gf
    assert catalan_gf(0) == 1
    assert catalan_gf(Fraction(1, 4)) == 2


def test_sine_identity_small_cases():
    with mp.workprec(256):
        assert antu_identity_check(0).residual == 0
        assert antu_identity_check(mp.pi / 3, 80).residual < 1e-10
    with pytest.raises(DomainError):
        antu_identity_check(2)
