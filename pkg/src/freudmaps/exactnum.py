"""Exact scalar arithmetic.

Three layers, all immutable:

* rationals are plain :class:`fractions.Fraction` values, with
  :func:`fmt_rational` / :func:`parse_rational` for the ``"p/q"`` wire form;
* :class:`RadicalElem` is an element of Q(theta) with theta**m = k, theta the
  positive real root;
* :class:`ParamPoly` is a Laurent polynomial in the scaling symbols
  ``A = N**(1/nu)`` and ``B = r**(1/nu)`` with RadicalElem coefficients.

:class:`QPoly` is a dense univariate polynomial over Q, used for numerators
and denominators of generating functions.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

__all__ = [
    "Fraction",
    "fmt_rational",
    "parse_rational",
    "RadicalField",
    "RadicalElem",
    "ParamPoly",
    "QPoly",
    "gen_binomial",
]


def fmt_rational(q) -> str:
    """Reduced ``p/q`` string; integers are written without ``/1``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def gen_binomial(a: Fraction, k: int) -> Fraction:
    """C(a, k) for rational ``a`` as a falling-factorial product."""
    if k < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out


class RadicalField:
    """Q(theta) with theta**degree = radicand, radicand > 0."""

    __slots__ = ("degree", "radicand")

    def __init__(self, degree: int, radicand):
        if degree < 1:
            raise ValueError("field degree must be >= 1")
        radicand = Fraction(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("RadicalField is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RadicalField)
            and self.degree == other.degree
            and self.radicand == other.radicand
        )

    def __hash__(self):
        return hash((self.degree, self.radicand))

    def __repr__(self):
        return f"RadicalField(m={self.degree}, k={fmt_rational(self.radicand)})"

    @classmethod
    def for_valence(cls, nu: int) -> "RadicalField":
        """Field holding theta with theta**nu = C(2nu-1, nu-1)."""
        return cls(nu, comb(2 * nu - 1, nu - 1))

    def elem(self, coeffs) -> "RadicalElem":
        return RadicalElem(self, coeffs)

    def scalar(self, q) -> "RadicalElem":
        return RadicalElem(self, [Fraction(q)] + [Fraction(0)] * (self.degree - 1))

    def zero(self) -> "RadicalElem":
        return self.scalar(0)

    def one(self) -> "RadicalElem":
        return self.scalar(1)

    def theta(self, power: int = 1) -> "RadicalElem":
        """theta**power, negative powers allowed."""
        m, k = self.degree, self.radicand
        q, rem = divmod(power, m)
        coeffs = [Fraction(0)] * m
        coeffs[rem] = k ** q
        return RadicalElem(self, coeffs)

    def to_json(self):
        return {"m": self.degree, "k": fmt_rational(self.radicand)}


class RadicalElem:
    """Element sum_i coeffs[i] * theta**i of a :class:`RadicalField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: RadicalField, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != field.degree:
            raise ValueError(
                f"expected {field.degree} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("RadicalElem is immutable")

    def _check(self, other):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, RadicalElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RadicalElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return RadicalElem(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RadicalElem(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RadicalElem(self.field, [a * other for a in self.coeffs])
        if not isinstance(other, RadicalElem):
            return NotImplemented
        return rad_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(theta)")
            return RadicalElem(self.field, [a / other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return rad_mul(self, rad_inv(other))

    def __pow__(self, e: int):
        if e < 0:
            return rad_inv(self) ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def to_float(self) -> float:
        t = float(self.field.radicand) ** (1.0 / self.field.degree)
        return sum(float(c) * t**i for i, c in enumerate(self.coeffs))

    def to_mpf(self):
        import mpmath

        t = mpmath.root(mpmath.mpf(self.field.radicand.numerator) / self.field.radicand.denominator,
                        self.field.degree)
        return sum(
            (mpmath.mpf(c.numerator) / c.denominator) * t**i
            for i, c in enumerate(self.coeffs)
        )

    def to_json(self):
        return {
            "m": self.field.degree,
            "k": fmt_rational(self.field.radicand),
            "coeffs": [fmt_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, d) -> "RadicalElem":
        field = RadicalField(int(d["m"]), parse_rational(d["k"]))
        return cls(field, [parse_rational(c) for c in d["coeffs"]])

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("θ" if i == 1 else f"θ^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"({fmt_rational(c)})·{mono}")
            else:
                parts.append(fmt_rational(c))
        return " + ".join(parts) if parts else "0"


def rad_mul(a: RadicalElem, b: RadicalElem) -> RadicalElem:
    """Product in Q(theta), reducing theta**m -> k."""
    a._check(b)
    m, k = a.field.degree, a.field.radicand
    acc = [Fraction(0)] * (2 * m - 1)
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if y:
                acc[i + j] += x * y
    out = acc[:m]
    for i in range(m, 2 * m - 1):
        if acc[i]:
            out[i - m] += k * acc[i]
    return RadicalElem(a.field, out)


def _pdivmod(num, den):
    """Division of dense Fraction coefficient lists (low->high)."""
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        f = num[-1] / lead
        q[shift] = f
        for i, d in enumerate(den):
            num[i + shift] -= f * d
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return q, num


def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def rad_inv(a: RadicalElem) -> RadicalElem:
    """Inverse in Q[theta]/(theta**m - k) by the extended Euclidean algorithm."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(theta)")
    m, k = a.field.degree, a.field.radicand
    # invariant: s_i * a == r_i  (mod modulus)
    r0 = [-k] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    r1 = _ptrim(a.coeffs)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, rem = _pdivmod(r0, r1)
        rem = _ptrim(rem)
        qs = _polymul(q, s1)
        s_new = _polysub(s0, qs)
        r0, r1 = r1, rem
        s0, s1 = s1, s_new
        if not r1:
            raise ZeroDivisionError(f"{a} is not invertible")
    c = r1[0]
    inv = [x / c for x in s1]
    inv = _pdivmod(inv, [-k] + [Fraction(0)] * (m - 1) + [Fraction(1)])[1] if len(inv) > m else inv
    inv = list(inv) + [Fraction(0)] * (m - len(inv))
    return RadicalElem(a.field, inv[:m])


def _polymul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _polysub(p, q):
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return _ptrim([a - b for a, b in zip(p, q)])


class ParamPoly:
    """Laurent polynomial in A, B over Q(theta).

    ``terms`` maps ``(eA, eB)`` to a nonzero RadicalElem.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field: RadicalField, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for (ea, eb), c in items:
            if not isinstance(c, RadicalElem):
                c = field.scalar(c)
            elif c.field != field:
                raise ValueError(f"field mismatch: {c.field} vs {field}")
            key = (int(ea), int(eb))
            if key in clean:
                c = clean[key] + c
            if c.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    @classmethod
    def _raw(cls, field, terms: dict) -> "ParamPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def monomial(cls, field, coeff, eA: int = 0, eB: int = 0) -> "ParamPoly":
        return cls(field, {(eA, eB): coeff})

    @classmethod
    def constant(cls, field, q) -> "ParamPoly":
        return cls(field, {(0, 0): field.scalar(q)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.constant(self.field, other)
        if isinstance(other, RadicalElem):
            return ParamPoly(self.field, {(0, 0): other})
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for key, c in other.terms.items():
            if key in out:
                s = out[key] + c
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
        return ParamPoly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw(self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ParamPoly._raw(self.field, {})
            return ParamPoly._raw(self.field, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                p = rad_mul(c1, c2)
                if key in out:
                    out[key] = out[key] + p
                else:
                    out[key] = p
        return ParamPoly._raw(self.field, {k: v for k, v in out.items() if not v.is_zero()})

    __rmul__ = __mul__

    def mul_monomial(self, coeff, eA: int = 0, eB: int = 0) -> "ParamPoly":
        if not isinstance(coeff, RadicalElem):
            coeff = self.field.scalar(coeff)
        if coeff.is_zero():
            return ParamPoly._raw(self.field, {})
        return ParamPoly._raw(
            self.field,
            {(a + eA, b + eB): rad_mul(c, coeff) for (a, b), c in self.terms.items()},
        )

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "ParamPoly":
        """Inverse of a single-term ParamPoly (the only units of the ring)."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit (needs exactly one term)")
        ((ea, eb), c), = self.terms.items()
        return ParamPoly._raw(self.field, {(-ea, -eb): rad_inv(c)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = ParamPoly.constant(self.field, 1)
        for _ in range(e):
            out = out * self
        return out

    def coeff(self, eA: int, eB: int) -> RadicalElem:
        return self.terms.get((eA, eB), self.field.zero())

    def set_A(self, value=1) -> "ParamPoly":
        """Substitute A -> value (a rational); collapses eA to 0."""
        value = Fraction(value)
        out = {}
        for (a, b), c in self.terms.items():
            c = c * (value ** a)
            out[(0, b)] = out[(0, b)] + c if (0, b) in out else c
        return ParamPoly(self.field, out)

    def weights(self, nu: int) -> set:
        """Set of eA + (nu-1)*eB over the terms (homogeneity degrees)."""
        return {a + (nu - 1) * b for a, b in self.terms}

    def evaluate(self, A, B, theta=None):
        """Numeric value with positive real A, B (mpmath or float inputs)."""
        import mpmath

        if theta is None:
            theta = mpmath.root(
                mpmath.mpf(self.field.radicand.numerator) / self.field.radicand.denominator,
                self.field.degree,
            )
        total = mpmath.mpf(0)
        for (a, b), c in self.terms.items():
            cv = sum(
                (mpmath.mpf(q.numerator) / q.denominator) * theta**i
                for i, q in enumerate(c.coeffs)
                if q
            )
            total += cv * mpmath.power(A, a) * mpmath.power(B, b)
        return total

    def to_json(self):
        return [
            {"eA": a, "eB": b, "c": c.to_json()}
            for (a, b), c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, field: RadicalField, rows) -> "ParamPoly":
        return cls(field, {(r["eA"], r["eB"]): RadicalElem.from_json(r["c"]) for r in rows})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (-t[0][1], t[0][0])):
            mono = "".join(
                s for s in (
                    "" if a == 0 else f"A^{a}",
                    "" if b == 0 else f"B^{b}",
                )
            )
            parts.append(f"({c}){mono}" if mono else f"({c})")
        return " + ".join(parts)


class QPoly:
    """Dense polynomial over Q, coefficients stored low -> high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def x(cls) -> "QPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, QPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return QPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QPoly(_polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = QPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _pdivmod(self.coeffs, other.coeffs)
        return QPoly(q), QPoly(r)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "QPoly") -> "QPoly":
        acc = QPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> "QPoly":
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def scale(self, q) -> "QPoly":
        return QPoly([c * q for c in self.coeffs])

    def __repr__(self):
        return f"QPoly([{', '.join(fmt_rational(c) for c in self.coeffs)}])"
