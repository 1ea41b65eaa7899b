from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from freudmaps.exactnum import RadicalField
from freudmaps.series import CouplingSeries, GaugeSeries, ser_mul
from freudmaps.stringeq import (string_equation, z0_closed_nu2, z0_coupling_series,
                                z0_puiseux, z0_v_series)


def test_puiseux_nu2():
    f = RadicalField.for_valence(2)
    z = z0_puiseux(2, 5)
    assert z[1] == f.theta() * Fraction(1, 3)  # 1/sqrt3
    assert z[2] == f.scalar(Fraction(-1, 6))
    assert z[3] == f.theta() * Fraction(1, 72)
    assert z[4] == f.zero()
    assert z[5] == f.theta() * Fraction(-1, 3456)


def test_puiseux_nu3_even_grid():
    z = z0_puiseux(3, 16)
    assert all(e % 2 == 0 for e in z.coeffs)


@pytest.mark.parametrize("nu", [2, 3, 4])
def test_v_series_residual(nu):
    # C z^nu + v^(nu-1) z - v^nu... checked as C y^nu + v y - 1 with z = v y
    order = 10
    z = z0_v_series(nu, order)
    f = RadicalField.for_valence(nu)
    y = GaugeSeries(1, {e - 1: c for e, c in z.coeffs.items()}, order - 1, f.zero())
    p = y
    for _ in range(nu - 1):
        p = ser_mul(p, y)
    v = GaugeSeries(1, {1: f.one()}, order - 1, f.zero())
    res = p * f.radicand + ser_mul(v, y) - GaugeSeries(1, {0: f.one()}, order - 1, f.zero())
    assert not res.coeffs


def test_coupling_series_nu2():
    z = z0_coupling_series(string_equation(2, "r"), 5)
    assert list(z.coeffs) == [1, -3, 18, -135, 1134, -10206]


def test_coupling_series_zero_order():
    assert list(z0_coupling_series(string_equation(2, "r"), 0).coeffs) == [1]


def test_trivalent_series():
    z = z0_coupling_series(string_equation("3v"), 8)
    assert z[0] == 1 and z[2] == 36
    assert all(z[j] == 0 for j in range(1, 9, 2))


def test_unknown_coupling():
    with pytest.raises(ValueError):
        string_equation(2, "q")


def test_closed_form():
    assert z0_closed_nu2(0) == 1
    with mpmath.workdps(50):
        assert abs(z0_closed_nu2(1) - (-1 + mpmath.sqrt(13)) / 6) < mpmath.mpf(10) ** -45


def test_closed_form_branch_cut():
    with pytest.raises(ValueError):
        z0_closed_nu2(Fraction(-1, 10))


@settings(max_examples=40)
@given(st.fractions(min_value=Fraction(-1, 50), max_value=5, max_denominator=100),
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=10))
def test_closed_form_quadratic(r, alpha):
    z0_closed_nu2(r, alpha, check=True)


def test_closed_form_matches_series():
    r = Fraction(1, 100)
    z = z0_coupling_series(string_equation(2, "r"), 30)
    with mpmath.workdps(40):
        approx = sum(mpmath.mpf(c.numerator) / c.denominator / mpmath.mpf(100) ** j
                     for j, c in enumerate(z.coeffs))
        assert abs(approx - z0_closed_nu2(r)) < 1e-25


@settings(max_examples=12, deadline=None)
@given(st.integers(2, 5), st.integers(3, 10))
def test_implicit_derivative(nu, J):
    # dz/dr = -C z^(nu+1) / (nu - (nu-1) z)
    C = comb(2 * nu - 1, nu - 1)
    z = z0_coupling_series(string_equation(nu, "r"), J)
    lhs = z.derivative()
    rhs = -(z ** (nu + 1)) * C / (CouplingSeries.constant(nu, J) - z * (nu - 1))
    assert all(lhs[j] == rhs[j] for j in range(J))
