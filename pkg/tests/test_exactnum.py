from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freudmaps.exactnum import ParamPoly, QPoly, RadicalField, fmt_rational, parse_rational
from freudmaps.exactnum import rad_inv, rad_mul

F2 = RadicalField(2, 3)
F3 = RadicalField(3, 10)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def elems(field):
    return st.lists(fracs, min_size=field.degree, max_size=field.degree).map(field.elem)


# -- examples ------------------------------------------------------------------

def test_difference_of_squares():
    one, t = F2.one(), F2.theta()
    assert (one + t) * (one - t) == F2.scalar(-2)


def test_theta_squared():
    assert F2.theta() * F2.theta() == F2.scalar(3)


def test_theta_fourth_in_cubic_field():
    t2 = F3.theta(2)
    assert t2 * t2 == F3.theta() * 10


def test_inverses():
    assert rad_inv(F2.theta()) == F2.theta() * Fraction(1, 3)
    assert rad_inv(F2.one() + F2.theta()) == (F2.theta() - 1) * Fraction(1, 2)
    assert rad_inv(F3.theta()) == F3.theta(2) * Fraction(1, 10)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rad_inv(F2.zero())


def test_negative_theta_powers():
    assert F3.theta(-1) * F3.theta() == F3.one()
    assert F2.theta(-3) == F2.theta() * Fraction(1, 9)


def test_parampoly_monomial_product():
    p = ParamPoly.monomial(F2, F2.theta(), -1, -1)
    assert p * p == ParamPoly.monomial(F2, F2.scalar(3), -2, -2)


def test_parampoly_cancels_to_empty():
    p = ParamPoly.monomial(F2, F2.theta(), 1, -3) + ParamPoly.constant(F2, 5)
    assert (p + (-p)).terms == {}
    assert not (p - p)


def test_homogeneity_weight():
    # A^-1 B^-1 theta^-1 at nu=2 has weight -1 + (2-1)(-1) = -2, i.e. scales by 1/sigma
    p = ParamPoly.monomial(F2, F2.theta(-1), -1, -1)
    assert p.weights(2) == {-2}


def test_rational_wire_format():
    assert fmt_rational(Fraction(6, 1)) == "6"
    assert fmt_rational(Fraction(-4, 6)) == "-2/3"
    assert parse_rational("-2/3") == Fraction(-2, 3)
    assert parse_rational("162") == 162


def test_qpoly_basics():
    z = QPoly.x()
    p = (z - 1) ** 2
    assert p.coeffs == (1, -2, 1)
    assert p(Fraction(3)) == 4
    q, r = divmod(p, z - 1)
    assert q == z - 1 and not r
    assert p.compose(z + 1) == z * z


# -- properties ----------------------------------------------------------------

@given(elems(F2), elems(F2), elems(F2))
def test_field_axioms_quadratic(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert rad_mul(a, b) == a * b


@settings(max_examples=60)
@given(elems(F3))
def test_inverse_roundtrip_cubic(a):
    if not a:
        return
    assert a * rad_inv(a) == F3.one()


@settings(max_examples=60)
@given(elems(F3))
def test_numeric_consistency(a):
    v = a.to_mpf()
    want = sum(float(c) * 10 ** (i / 3) for i, c in enumerate(a.coeffs))
    assert abs(float(v) - want) <= 1e-9 * (1 + abs(want))


@given(st.lists(fracs, max_size=5), st.lists(fracs, max_size=5), fracs)
def test_qpoly_ring(p, q, x):
    P, Q = QPoly(p), QPoly(q)
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)


@given(fracs)
def test_rational_roundtrip(q):
    assert parse_rational(fmt_rational(q)) == q
