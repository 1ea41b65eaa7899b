"""The string equation for the planar generating function z0.

Even valence 2nu, at alpha = 1::

    1 = z0 + C(2nu-1, nu-1) * coupling * z0**nu

with coupling ``r`` (t_{2nu} = r / 2nu), or ``s = -t_{2nu}``.  Trivalent::

    1 = z0**2 - 72 t**2 z0**3

All coupling-variable conversions live in :func:`string_equation`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactnum import RadicalField
from .series import CouplingSeries, GaugeSeries, ser_mul, ser_recip

__all__ = [
    "StringEquationSpec",
    "string_equation",
    "z0_puiseux",
    "z0_v_series",
    "z0_coupling_series",
    "z0_closed_nu2",
]


@dataclass(frozen=True)
class StringEquationSpec:
    """``sum coef * x**a * z0**b == 0`` over the listed ``(coef, a, b)``."""

    kind: str  # "even" | "trivalent"
    nu: int | None
    coupling: str
    terms: tuple

    @property
    def constant(self) -> int | None:
        return comb(2 * self.nu - 1, self.nu - 1) if self.kind == "even" else None


def string_equation(nu="2", coupling: str = "r") -> StringEquationSpec:
    """Build the string equation for valence ``2nu`` (or ``"3v"``).

    ``coupling``: ``"r"`` (default, z-counts), ``"s"`` = -r/(2nu) (e-counts),
    ``"t"`` for the trivalent case.
    """
    if str(nu) in ("3v", "trivalent", "3/2"):
        if coupling not in ("t",):
            coupling = "t"
        return StringEquationSpec("trivalent", None, "t",
                                  ((Fraction(-1), 0, 0), (Fraction(1), 0, 2),
                                   (Fraction(-72), 2, 3)))
    nu = int(nu)
    if nu < 2:
        raise ValueError("nu must be >= 2")
    C = comb(2 * nu - 1, nu - 1)
    if coupling == "r":
        k = Fraction(C)
    elif coupling == "s":
        k = Fraction(-2 * nu * C)
    elif coupling == "t":
        k = Fraction(2 * nu * C)
    else:
        raise ValueError(f"unknown coupling {coupling!r}")
    return StringEquationSpec("even", nu, coupling,
                              ((Fraction(-1), 0, 0), (Fraction(1), 0, 1), (k, 1, nu)))


def z0_coupling_series(spec: StringEquationSpec, J: int) -> CouplingSeries:
    """Taylor series of z0 in the coupling, z0(0) = 1, by Newton iteration."""
    if J < 0:
        raise ValueError("J must be >= 0")
    z = CouplingSeries.constant(1, J)
    x = CouplingSeries.variable(J) if J >= 1 else CouplingSeries([0])
    prec = 1
    while True:
        F = CouplingSeries.constant(0, J)
        dF = CouplingSeries.constant(0, J)
        for coef, a, b in spec.terms:
            xa = x ** a
            F = F + xa * (z ** b) * coef
            if b:
                dF = dF + xa * (z ** (b - 1)) * (coef * b)
        z = z - F / dF
        if prec > J:
            break
        prec *= 2
    return z


def z0_v_series(nu: int, order: int) -> GaugeSeries:
    """z0 at gamma = 1 as a series in ``v = n**(-(nu-1)/nu)`` up to ``v**order``.

    With z0 = v*y the string equation becomes ``C y**nu + v y - 1 = 0``,
    y(0) = theta**-1; solved by Newton iteration over Q(theta).
    """
    field = RadicalField.for_valence(nu)
    C = field.radicand
    one = field.one()
    zero = field.zero()
    y = GaugeSeries(1, {0: field.theta(-1)}, 0, zero)
    prec = 1
    target = order - 1
    while y.order < target:
        prec = min(2 * prec, target + 1)
        y = GaugeSeries(1, y.coeffs, prec - 1, zero)
        v = GaugeSeries(1, {1: one}, prec - 1, zero)
        ypow = y
        for _ in range(nu - 2):
            ypow = ser_mul(ypow, y)
        # ypow = y**(nu-1)
        F = ser_mul(ypow, y) * C + ser_mul(v, y) - GaugeSeries(1, {0: one}, prec - 1, zero)
        dF = ypow * (C * nu) + v
        y = y - ser_mul(F, ser_recip(dF))
        y = y.truncate(prec - 1)
    z = GaugeSeries(1, {e + 1: c for e, c in y.coeffs.items()}, max(order, 1), zero)
    return z.truncate(order)


def z0_puiseux(nu: int, order: int) -> GaugeSeries:
    """Newton-Puiseux expansion of z0 (gamma = 1) in ``u = n**(-1/nu)``.

    Only exponents that are multiples of nu-1 carry nonzero coefficients.
    """
    if order < nu - 1:
        raise ValueError(f"order {order} below the leading exponent {nu - 1}")
    zv = z0_v_series(nu, order // (nu - 1))
    coeffs = {e * (nu - 1): c for e, c in zv.coeffs.items()}
    return GaugeSeries(nu, coeffs, order, zv.zero)


def z0_closed_nu2(r, alpha=1, check: bool = False, dps: int = 50):
    """(-1 + sqrt(1 + 12 alpha r)) / (6 alpha r), with the r -> 0 limit 1.

    Floating value (mpmath).  With ``check=True`` the quadratic
    ``3 alpha r z0**2 + z0 - 1`` is verified to vanish at working precision.
    """
    import mpmath

    with mpmath.workdps(dps):
        r = mpmath.mpf(r) if not isinstance(r, Fraction) else mpmath.mpf(r.numerator) / r.denominator
        alpha = (mpmath.mpf(alpha) if not isinstance(alpha, Fraction)
                 else mpmath.mpf(alpha.numerator) / alpha.denominator)
        ar = alpha * r
        disc = 1 + 12 * ar
        if disc <= 0:
            raise ValueError(f"alpha*r = {ar} lies on the branch cut (<= -1/12)")
        if ar == 0:
            z = mpmath.mpf(1)
        else:
            z = (-1 + mpmath.sqrt(disc)) / (6 * ar)
        if check:
            res = 3 * ar * z**2 + z - 1
            if abs(res) > mpmath.mpf(10) ** (-(dps - 5)):
                raise ArithmeticError(f"quadratic residual {res} too large")
        return +z
