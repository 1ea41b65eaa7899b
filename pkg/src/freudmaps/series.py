"""Truncated series arithmetic.

:class:`GaugeSeries` is a sparse Laurent series in ``u = n**(-1/nu)`` whose
coefficients may live in any exact ring exposing ``+``, ``*``, unary ``-``
and truthiness (Fraction, RadicalElem, ParamPoly).  ``order`` is the highest
exponent whose coefficient is known; anything above it is undefined, not
zero.

:class:`CouplingSeries` is a dense power series in the coupling constant with
Fraction coefficients, used to turn generating functions into counts.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .exactnum import ParamPoly, QPoly, RadicalElem, fmt_rational, gen_binomial, rad_inv

__all__ = [
    "GaugeSeries",
    "CouplingSeries",
    "ser_mul",
    "ser_recip",
    "ser_pow",
    "shift_reexpand",
    "cs_compose",
]


def _inv(c):
    if isinstance(c, RadicalElem):
        return rad_inv(c)
    if isinstance(c, ParamPoly):
        return c.inverse()
    if not c:
        raise ZeroDivisionError("leading coefficient is zero")
    return Fraction(1) / c


def _zero_like(c):
    return c - c


class GaugeSeries:
    """Sum of ``coeffs[e] * u**e`` for ``e <= order``."""

    __slots__ = ("nu", "coeffs", "order", "zero")

    def __init__(self, nu: int, coeffs: dict, order: int, zero=Fraction(0)):
        if nu < 1:
            raise ValueError("grid denominator must be positive")
        clean = {int(e): c for e, c in coeffs.items() if e <= order and c}
        object.__setattr__(self, "nu", int(nu))
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "zero", zero)

    def __setattr__(self, name, value):
        raise AttributeError("GaugeSeries is immutable")

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (order+1 if none)."""
        return min(self.coeffs) if self.coeffs else self.order + 1

    @property
    def lowest(self) -> int:
        return self.valuation

    def __getitem__(self, e):
        if e > self.order:
            raise IndexError(f"exponent {e} beyond truncation order {self.order}")
        return self.coeffs.get(e, self.zero)

    def _check(self, other):
        if not isinstance(other, GaugeSeries):
            raise TypeError("expected a GaugeSeries")
        if other.nu != self.nu:
            raise ValueError(f"grid mismatch: nu={self.nu} vs nu={other.nu}")

    def __add__(self, other):
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return GaugeSeries(self.nu, out, order, self.zero)

    def __neg__(self):
        return GaugeSeries(self.nu, {e: -c for e, c in self.coeffs.items()}, self.order, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaugeSeries):
            return ser_mul(self, other)
        return GaugeSeries(self.nu, {e: c * other for e, c in self.coeffs.items()},
                           self.order, self.zero)

    __rmul__ = __mul__

    def shift_exponent(self, k: int) -> "GaugeSeries":
        """Multiply by ``u**k``."""
        return GaugeSeries(self.nu, {e + k: c for e, c in self.coeffs.items()},
                           self.order + k, self.zero)

    def truncate(self, order: int) -> "GaugeSeries":
        return GaugeSeries(self.nu, self.coeffs, min(order, self.order), self.zero)

    def map(self, fn) -> "GaugeSeries":
        return GaugeSeries(self.nu, {e: fn(c) for e, c in self.coeffs.items()},
                           self.order, fn(self.zero))

    def __eq__(self, other):
        if not isinstance(other, GaugeSeries):
            return NotImplemented
        return (self.nu, self.order, self.coeffs) == (other.nu, other.order, other.coeffs)

    def agrees_with(self, other, order=None) -> bool:
        """Coefficient equality up to ``order`` (default: common order)."""
        self._check(other)
        top = min(self.order, other.order) if order is None else order
        keys = {e for e in list(self.coeffs) + list(other.coeffs) if e <= top}
        return all(self[e] == other[e] for e in keys)

    def to_json(self) -> str:
        """Debug dump as ``{exponent: coefficient}``."""

        def enc(c):
            if isinstance(c, (RadicalElem, ParamPoly)):
                return c.to_json()
            return fmt_rational(c)

        return json.dumps({str(e): enc(c) for e, c in sorted(self.coeffs.items())})

    def __repr__(self):
        body = " + ".join(f"({c})u^{e}" for e, c in sorted(self.coeffs.items()))
        return f"GaugeSeries(nu={self.nu}, {body or '0'} + O(u^{self.order + 1}))"


def ser_mul(a: GaugeSeries, b: GaugeSeries) -> GaugeSeries:
    """Product, truncated where both factors still guarantee every term."""
    a._check(b)
    order = min(a.order + b.valuation, b.order + a.valuation)
    out = {}
    for ea, ca in a.coeffs.items():
        for eb, cb in b.coeffs.items():
            e = ea + eb
            if e > order:
                continue
            p = ca * cb
            out[e] = out[e] + p if e in out else p
    return GaugeSeries(a.nu, out, order, a.zero)


def ser_recip(a: GaugeSeries) -> GaugeSeries:
    """Multiplicative inverse to the order supported by ``a``."""
    if not a.coeffs:
        raise ZeroDivisionError("reciprocal of a series with no known nonzero term")
    v = a.valuation
    lead_inv = _inv(a.coeffs[v])
    rel = a.order - v
    b = [lead_inv]
    for n in range(1, rel + 1):
        acc = None
        for i in range(1, n + 1):
            ai = a.coeffs.get(v + i)
            if ai is None:
                continue
            t = ai * b[n - i]
            acc = t if acc is None else acc + t
        b.append(_zero_like(lead_inv) if acc is None else -(lead_inv * acc))
    return GaugeSeries(a.nu, {-v + n: c for n, c in enumerate(b)}, -v + rel,
                       _zero_like(lead_inv))


def ser_pow(a: GaugeSeries, e: int) -> GaugeSeries:
    if e < 0:
        return ser_pow(ser_recip(a), -e)
    if e == 0:
        return GaugeSeries(a.nu, {0: _one_like(a)}, a.order - a.valuation, a.zero)
    out = a
    for _ in range(e - 1):
        out = ser_mul(out, a)
    return out


def _one_like(a: GaugeSeries):
    c = next(iter(a.coeffs.values()))
    if isinstance(c, RadicalElem):
        return c.field.one()
    if isinstance(c, ParamPoly):
        return ParamPoly.constant(c.field, 1)
    return Fraction(1)


def shift_reexpand(a: GaugeSeries, j: int) -> GaugeSeries:
    """Re-expand ``sum c_i (n+j)**(-i/nu)`` in powers of ``u = n**(-1/nu)``.

    Each term picks up ``sum_k C(-i/nu, k) j**k u**(nu*k)``.
    """
    nu = a.nu
    if j == 0 or not a.coeffs:
        return a
    if a.order - a.valuation < nu:
        raise ValueError(
            f"truncation order {a.order} too short for any shift correction "
            f"(valuation {a.valuation}, nu {nu})"
        )
    out = {}
    for i, c in a.coeffs.items():
        expo = Fraction(-i, nu)
        k = 0
        while i + nu * k <= a.order:
            w = gen_binomial(expo, k) * Fraction(j) ** k
            if w:
                e = i + nu * k
                t = c * w
                out[e] = out[e] + t if e in out else t
            k += 1
    return GaugeSeries(nu, out, a.order, a.zero)


class CouplingSeries:
    """Dense power series ``sum_{i<=J} coeffs[i] x**i`` over Q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        if not self.coeffs:
            raise ValueError("a coupling series needs at least one coefficient")

    def __setattr__(self, name, value):
        raise AttributeError("CouplingSeries is immutable")

    @property
    def J(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, J: int) -> "CouplingSeries":
        return cls([c] + [0] * J)

    @classmethod
    def variable(cls, J: int) -> "CouplingSeries":
        return cls([0, 1] + [0] * (J - 1)) if J >= 1 else cls([0])

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CouplingSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def _coerce(self, other):
        if isinstance(other, CouplingSeries):
            if other.J != self.J:
                J = min(self.J, other.J)
                return CouplingSeries(other.coeffs[: J + 1])
            return other
        if isinstance(other, (int, Fraction)):
            return CouplingSeries.constant(other, self.J)
        return NotImplemented

    def truncate(self, J: int) -> "CouplingSeries":
        return CouplingSeries(self.coeffs[: J + 1])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        J = min(self.J, other.J)
        return CouplingSeries([self.coeffs[i] + other.coeffs[i] for i in range(J + 1)])

    __radd__ = __add__

    def __neg__(self):
        return CouplingSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CouplingSeries([c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        J = min(self.J, other.J)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(J + 1):
            s = Fraction(0)
            for i in range(n + 1):
                if a[i] and b[n - i]:
                    s += a[i] * b[n - i]
            out.append(s)
        return CouplingSeries(out)

    __rmul__ = __mul__

    def recip(self) -> "CouplingSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("pole at the expansion point (zero constant term)")
        inv0 = 1 / a[0]
        b = [inv0]
        for n in range(1, self.J + 1):
            s = sum((a[i] * b[n - i] for i in range(1, n + 1) if a[i]), Fraction(0))
            b.append(-inv0 * s)
        return CouplingSeries(b)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.recip()

    def __pow__(self, e: int):
        if e < 0:
            return self.recip() ** (-e)
        out = CouplingSeries.constant(1, self.J)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def log(self) -> "CouplingSeries":
        """ln of a series with constant term 1: sum (-1)**(k+1) h**k / k."""
        if self.coeffs[0] != 1:
            if self.coeffs[0] == 0:
                raise ZeroDivisionError("logarithm of a series vanishing at the expansion point")
            raise ValueError(
                f"log argument evaluates to {fmt_rational(self.coeffs[0])} at the "
                "expansion point; only ln(1 + h) is supported"
            )
        h = self - 1
        out = CouplingSeries.constant(0, self.J)
        power = CouplingSeries.constant(1, self.J)
        for k in range(1, self.J + 1):
            power = power * h
            out = out + power * Fraction((-1) ** (k + 1), k)
        return out

    def derivative(self) -> "CouplingSeries":
        d = [i * c for i, c in enumerate(self.coeffs)][1:]
        return CouplingSeries(d or [0])

    def compose_poly(self, p: QPoly) -> "CouplingSeries":
        """p(self) by Horner's rule."""
        acc = CouplingSeries.constant(0, self.J)
        for c in reversed(p.coeffs):
            acc = acc * self + c
        return acc

    def __repr__(self):
        return f"CouplingSeries([{', '.join(fmt_rational(c) for c in self.coeffs)}])"


def cs_compose(f, g: CouplingSeries) -> CouplingSeries:
    """Taylor expansion of ``f(g)`` for a generating function ``f`` of z0.

    ``f`` exposes ``numerator``/``denominator`` (QPoly) and ``logs``, a list
    of ``(constant, arg_numerator, arg_denominator)``.
    """
    den = g.compose_poly(f.denominator)
    if den[0] == 0:
        raise ZeroDivisionError("generating function has a pole at the expansion point")
    out = g.compose_poly(f.numerator) / den
    for const, anum, aden in f.logs:
        d = g.compose_poly(aden)
        if d[0] == 0:
            raise ZeroDivisionError("log argument has a pole at the expansion point")
        arg = g.compose_poly(anum) / d
        out = out + arg.log() * Fraction(const)
    return out
