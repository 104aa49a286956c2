from fractions import Fraction

import pytest
from mpmath import mp

from catalan_moments.exactcore import DomainError
from catalan_moments.mellin import (DUAL_FORM_FAMILIES, MellinRangeError, dual_form, duplication_check,
                                    mellin, mellin_form, mellin_moment_consistency, mellin_scaling_check,
                                    scaled_family_check, tabulate)
from catalan_moments.sequences import Family, all_families, family

TIGHT = mp.mpf(10) ** -50


def test_spot_values():
    assert mellin(family("catalan"), 1, 1) == 1
    with mp.workprec(256):
        assert abs(mellin(family("fuss-catalan", k=2), 1, 2) - 3) < TIGHT
        assert abs(mellin(family("factorial"), 1, Fraction(1, 2)) - mp.sqrt(mp.pi) / 2) < TIGHT


@pytest.mark.parametrize("fid", all_families(), ids=lambda f: f.name)
def test_matches_moments_at_integers(fid):
    for c in ("1/2", "1"):
        try:
            assert mellin_moment_consistency(fid, c, 20) < TIGHT
        except MellinRangeError:
            pass


@pytest.mark.parametrize("tag", DUAL_FORM_FAMILIES)
def test_dual_form_against_mpmath_gamma(tag):
    fid = family(tag)
    with mp.workprec(300):
        for s in (Fraction(1, 3), Fraction(5, 2), Fraction(7)):
            sm = mp.mpf(s.numerator) / s.denominator
            a = mellin(fid, 1, s)
            b = dual_form(fid, 1, s)
            assert abs(a - b) / b < TIGHT
            # independent oracle through mpmath's own gamma
            ref = {Family.CATALAN: mp.gamma(2 * sm + 1) / (mp.gamma(sm + 1) * mp.gamma(sm + 2)),
                   Family.CENTRAL_BINOMIAL: mp.gamma(2 * sm + 1) / mp.gamma(sm + 1) ** 2,
                   Family.CENTRAL_BINOMIAL_SCALED: mp.gamma(2 * sm + 1) / mp.gamma(sm + 1) ** 2 / 2 ** sm,
                   Family.DOUBLE_FACTORIAL: 2 ** sm * mp.gamma(sm + mp.mpf(1) / 2) / mp.sqrt(mp.pi)}[tag]
            assert abs(a - ref) / ref < TIGHT


def test_power_law():
    fid = family("fuss-binomial", k=3)
    with mp.workprec(256):
        for s in (Fraction(1, 2), Fraction(9, 4)):
            m1 = mellin(fid, 1, s)
            m3 = mellin(fid, Fraction(3, 2), s)
            assert abs(m3 - m1 ** mp.mpf(1.5)) / m3 < TIGHT


def test_log_convex_in_s():
    form = mellin_form(family("catalan"), Fraction(1, 2))
    with mp.workprec(256):
        logs = [form.log(Fraction(j, 4)) for j in range(40)]
        assert all(logs[j + 1] - 2 * logs[j] + logs[j - 1] > 0 for j in range(1, 39))


def test_range_guard():
    with pytest.raises(MellinRangeError):
        mellin(family("factorial"), 3, 1)
    with pytest.raises(MellinRangeError):
        mellin(family("even-factorial"), Fraction(3, 2), 1)
    with pytest.raises(MellinRangeError):
        mellin(family("k-factorial", k=3), 1, 1)
    assert mellin(family("factorial"), 3, 2, uncertified=True) == 8
    assert mellin(family("factorial"), 2, 3) == 36


def test_domain():
    with pytest.raises(DomainError):
        mellin(family("catalan"), 1, -1)
    with pytest.raises(DomainError):
        mellin(family("catalan"), 0, 1)
    with pytest.raises(DomainError):
        dual_form(family("factorial"), 1, 1)


def test_conjectural_flags():
    assert mellin_form(family("gamma-power", a=2), 1).conjectural
    assert not mellin_form(family("catalan"), 1).conjectural


@pytest.mark.parametrize("x", ["1/2", "1", "3.25", "10"])
def test_duplication(x):
    assert duplication_check(x) < TIGHT


def test_duplication_domain():
    with pytest.raises(DomainError):
        duplication_check(0)


@pytest.mark.parametrize("fid", [family("catalan"), family("double-factorial"), family("fuss-catalan", k=2)],
                         ids=lambda f: f.name)
def test_scaling_law(fid):
    assert mellin_scaling_check(fid, 3, Fraction(1, 2), Fraction(5, 2)) < TIGHT
    assert mellin_scaling_check(fid, Fraction(1, 2), 2, 4) < TIGHT


def test_scaled_family():
    assert scaled_family_check() < TIGHT


def test_tabulate_rows():
    rows = tabulate(family("catalan"), 1, [0, Fraction(1, 2), 1], digits=20)
    assert [r["s"] for r in rows] == ["0", "1/2", "1"]
    assert rows[2]["mellin"].startswith("1.0000")
