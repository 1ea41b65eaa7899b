"""Freud (discrete string) equation and its large-n orbit expansion.

For the weight ``exp(-N (l**2/2 + r l**(2nu)/(2nu)))`` the squared recurrence
coefficients ``x_n = b_n**2`` satisfy ``n/N = x_n + r M_nu(x_{n+j})``.  The
positive orbit has an expansion ``x_n ~ sum_{k>=-1} c_k(N, r) n**(-k/nu)``;
:func:`cm_expand` produces the ``c_k`` exactly as :class:`ParamPoly` values in
``A = N**(1/nu)``, ``B = r**(1/nu)`` over Q(theta), theta**nu = C(2nu-1, nu-1).
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exactnum import ParamPoly, RadicalField, gen_binomial
from .series import GaugeSeries, ser_mul, shift_reexpand

log = logging.getLogger(__name__)

__all__ = [
    "OrderShortfall",
    "FreudPolynomial",
    "build_freud",
    "CmExpansion",
    "cm_expand",
    "rescale_cm",
    "k_nu",
    "residual_series",
]


class OrderShortfall(ValueError):
    """An expansion was requested beyond the order it was computed to."""


def k_nu(nu: int, g: int) -> int:
    """Highest expansion index needed to pin down genus ``g``."""
    return 5 * g * nu - 2 * nu - 3 * g + 1


@dataclass(frozen=True)
class FreudPolynomial:
    """M_nu as a polynomial in ``x_{n+j}``.

    ``terms`` maps a sorted tuple of offsets (one per factor) to its integer
    multiplicity.
    """

    nu: int
    terms: dict = field(hash=False)

    @property
    def offsets(self) -> list:
        return sorted({j for mono in self.terms for j in mono})

    def all_ones(self) -> int:
        return sum(self.terms.values())

    def evaluate(self, x):
        """``x`` maps offset -> value (anything supporting * and +)."""
        total = 0
        for mono, mult in self.terms.items():
            p = mult
            for j in mono:
                p = p * x[j]
            total = total + p
        return total

    def reflected(self) -> "FreudPolynomial":
        """Image under the offset reversal ``j -> -j``."""
        return FreudPolynomial(
            self.nu, {tuple(sorted(-j for j in mono)): m for mono, m in self.terms.items()}
        )

    def degree_ok(self) -> bool:
        return all(len(mono) == self.nu for mono in self.terms)

    def __str__(self):
        def xname(j):
            return "x_n" if j == 0 else (f"x_{{n+{j}}}" if j > 0 else f"x_{{n{j}}}")

        parts = []
        for mono, m in sorted(self.terms.items()):
            body = "".join(xname(j) for j in mono)
            parts.append(body if m == 1 else f"{m}{body}")
        return " + ".join(parts)


def build_freud(nu: int) -> FreudPolynomial:
    """M_nu from the (n, n-1) entry of the banded power J**(2nu-1), times b_n.

    Levels are offsets from n; the edge between levels l-1 and l carries
    b_{n+l}.  The walk runs on the window of levels -2nu..2nu.
    """
    if nu < 2:
        raise ValueError("valence parameter nu must be >= 2")
    lo, hi = -2 * nu, 2 * nu
    # level -> Counter(sorted tuple of b-offsets -> multiplicity)
    state = {-1: Counter({(): 1})}
    for _ in range(2 * nu - 1):
        nxt = {}
        for lev, poly in state.items():
            for dest, b in ((lev + 1, lev + 1), (lev - 1, lev)):
                if not lo <= dest <= hi:
                    continue
                bucket = nxt.setdefault(dest, Counter())
                for mono, m in poly.items():
                    bucket[tuple(sorted(mono + (b,)))] += m
        state = nxt
    entry = state.get(0, Counter())
    terms = Counter()
    for mono, m in entry.items():
        full = Counter(mono + (0,))
        if any(e % 2 for e in full.values()):
            raise AssertionError(f"odd power of b in {full}")
        xs = []
        for j, e in full.items():
            xs.extend([j] * (e // 2))
        terms[tuple(sorted(xs))] += m
    poly = FreudPolynomial(nu, dict(terms))
    assert poly.degree_ok()
    assert poly.all_ones() == comb(2 * nu - 1, nu - 1)
    return poly


@dataclass(frozen=True)
class CmExpansion:
    """Coefficients ``c_k`` for k = -1..kmax; ``coeffs[k + 1]`` is c_k."""

    nu: int
    kmax: int
    coeffs: tuple

    @property
    def field(self) -> RadicalField:
        return self.coeffs[0].field

    def c(self, k: int) -> ParamPoly:
        if k < -1:
            return ParamPoly(self.field, {})
        if k > self.kmax:
            raise IndexError(f"c_{k} not computed (kmax={self.kmax})")
        return self.coeffs[k + 1]

    def as_series(self) -> GaugeSeries:
        """x_n as a GaugeSeries in u = n**(-1/nu)."""
        zero = ParamPoly(self.field, {})
        return GaugeSeries(
            self.nu, {k: self.c(k) for k in range(-1, self.kmax + 1)}, self.kmax, zero
        )

    def truncated(self, kmax: int) -> "CmExpansion":
        return CmExpansion(self.nu, kmax, self.coeffs[: kmax + 2])

    def evaluate(self, n, N, r, m=None):
        """Partial sum up to c_m at numeric n, N, r (mpmath)."""
        import mpmath

        m = self.kmax if m is None else m
        A = mpmath.root(N, self.nu)
        B = mpmath.root(r, self.nu)
        rad = Fraction(self.field.radicand)
        theta = mpmath.root(mpmath.mpf(rad.numerator) / rad.denominator, self.nu)
        u = mpmath.root(mpmath.mpf(n), self.nu) ** -1
        return sum(self.c(k).evaluate(A, B, theta) * u**k for k in range(-1, m + 1))

    def to_json(self):
        return {
            "nu": self.nu,
            "kmax": self.kmax,
            "field": self.field.to_json(),
            "c": [{"k": k, "terms": self.c(k).to_json()} for k in range(-1, self.kmax + 1)],
        }


class _Node:
    """Node of the Horner tree for M_nu; coefficients computed lazily."""

    __slots__ = ("memo", "valuation", "reach")

    def coef(self, q, ctx):
        raise NotImplementedError


class _Const(_Node):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value
        self.valuation = 0
        self.reach = -(10**9)
        self.memo = {}

    def coef(self, q, ctx):
        if q == 0:
            return ctx.zero + self.value
        return ctx.zero


class _Leaf(_Node):
    __slots__ = ("j",)

    def __init__(self, j):
        self.j = j
        self.valuation = -1
        self.reach = 0
        self.memo = {}

    def coef(self, q, ctx):
        if q < -1:
            return ctx.zero
        if q in self.memo:
            return self.memo[q]
        val = ctx.shifted(self.j, q)
        if q < ctx.m:
            self.memo[q] = val
        return val


class _Sum(_Node):
    __slots__ = ("kids",)

    def __init__(self, kids):
        self.kids = kids
        self.valuation = min(k.valuation for k in kids)
        self.reach = max(k.reach for k in kids)
        self.memo = {}

    def coef(self, q, ctx):
        if q in self.memo:
            return self.memo[q]
        val = ctx.zero
        for k in self.kids:
            val = val + k.coef(q, ctx)
        if q + self.reach < ctx.m:
            self.memo[q] = val
        return val


class _Prod(_Node):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.valuation = a.valuation + b.valuation
        self.reach = max(a.reach - b.valuation, b.reach - a.valuation)
        self.memo = {}

    def coef(self, q, ctx):
        if q < self.valuation:
            return ctx.zero
        if q in self.memo:
            return self.memo[q]
        val = ctx.zero
        va, vb = self.a.valuation, self.b.valuation
        for i in range(va, q - vb + 1):
            x = self.a.coef(i, ctx)
            if not x:
                continue
            y = self.b.coef(q - i, ctx)
            if y:
                val = val + x * y
        if q + self.reach < ctx.m:
            self.memo[q] = val
        return val


def _horner_tree(terms: dict) -> _Node:
    """Nested form sum_j x_j * (...) grouped on the smallest offset."""
    if all(len(mono) == 0 for mono in terms):
        return _Const(sum(terms.values()))
    groups = {}
    const = 0
    for mono, m in terms.items():
        if not mono:
            const += m
            continue
        groups.setdefault(mono[0], {})[mono[1:]] = m
    kids = [_Prod(_Leaf(j), _horner_tree(sub)) for j, sub in sorted(groups.items())]
    if const:
        kids.append(_Const(const))
    return kids[0] if len(kids) == 1 else _Sum(kids)


class _Ctx:
    """Solver state: solved c_k, current step m and the probe value for c_m."""

    def __init__(self, nu, field):
        self.nu = nu
        self.field = field
        self.zero = ParamPoly(field, {})
        self.c = {}
        self.m = 0
        self.probe = self.zero
        self._binom = {}

    def cval(self, k):
        if k < -1:
            return self.zero
        if k == self.m:
            return self.probe
        return self.c[k]

    def shifted(self, j, q):
        """Coefficient of u**q in x_{n+j}."""
        val = self.cval(q)
        if j == 0:
            return val
        nu = self.nu
        lvl = 1
        while q - nu * lvl >= -1:
            k = q - nu * lvl
            key = (k, lvl)
            w = self._binom.get(key)
            if w is None:
                w = self._binom[key] = gen_binomial(Fraction(-k, nu), lvl)
            if w:
                ck = self.c[k]
                if ck:
                    val = val + ck * (w * Fraction(j) ** lvl)
            lvl += 1
        return val


def cm_expand(nu: int, kmax: int, freud: FreudPolynomial | None = None) -> CmExpansion:
    """Solve the Freud equation order by order for c_{-1}..c_{kmax}.

    Order ``u**(m+1-nu)`` of the residual is affine in c_m; it is evaluated
    with c_m probed at 0 and at 1 and the affine relation solved exactly.
    """
    if kmax < -1:
        raise ValueError("kmax must be >= -1")
    freud = freud or build_freud(nu)
    field = RadicalField.for_valence(nu)
    ctx = _Ctx(nu, field)
    # c_{-1} = theta**(-1) A**-1 B**-1: the positive root of r M(1) c**nu = 1/N
    ctx.c[-1] = ParamPoly.monomial(field, field.theta(-1), -1, -1)
    tree = _horner_tree(freud.terms)
    one = ParamPoly.constant(field, 1)
    for m in range(0, kmax + 1):
        ctx.m = m
        p = m + 1 - nu
        ctx.probe = ctx.zero
        r0 = _residual_coef(tree, ctx, p)
        ctx.probe = one
        r1 = _residual_coef(tree, ctx, p)
        slope = r1 - r0
        if not slope:
            raise ArithmeticError(
                f"vanishing affine slope at order u^{p} while solving c_{m} (nu={nu})"
            )
        if not slope.is_monomial():
            raise ArithmeticError(f"affine slope {slope} for c_{m} is not a unit")
        ctx.c[m] = -(r0 / slope)
        log.debug("solved c_%d: %d terms", m, len(ctx.c[m].terms))
    coeffs = tuple(ctx.c[k] for k in range(-1, kmax + 1))
    return CmExpansion(nu, kmax, coeffs)


def _residual_coef(tree, ctx, p):
    """[u**p] of x_n + r M_nu - n/N (for p > -nu the n/N term is absent)."""
    r = ParamPoly.monomial(ctx.field, 1, 0, ctx.nu)
    return ctx.cval(p) + r * tree.coef(p, ctx)


def residual_series(e: CmExpansion, freud: FreudPolynomial | None = None) -> GaugeSeries:
    """Full residual x_n + r M_nu - n/N from the truncated expansion.

    Independent of the incremental solver: every shifted orbit is built with
    :func:`shift_reexpand` and multiplied with :func:`ser_mul`.
    """
    freud = freud or build_freud(e.nu)
    nu, field = e.nu, e.field
    x = e.as_series()
    shifted = {j: shift_reexpand(x, j) for j in freud.offsets}
    zero = ParamPoly(field, {})
    total = None
    for mono, mult in freud.terms.items():
        prod = shifted[mono[0]]
        for j in mono[1:]:
            prod = ser_mul(prod, shifted[j])
        prod = prod * Fraction(mult)
        total = prod if total is None else total + prod
    rM = total.map(lambda c: c.mul_monomial(1, 0, nu))
    lhs = GaugeSeries(nu, {-nu: ParamPoly.monomial(field, 1, -nu, 0)}, rM.order, zero)
    return x.truncate(rM.order) + rM - lhs


def rescale_cm(e: CmExpansion, alpha=1) -> GaugeSeries:
    """Series in u of ``sum_k c_k(1/alpha, 1/xi) n**(-1-k/nu)``.

    ``A = N**(1/nu)`` is replaced by ``alpha**(-1/nu)`` (alpha must be a
    perfect nu-th power of a rational); ``B = (1/xi)**(1/nu)`` stays formal.
    The coefficient of ``u**(k+nu)`` is c_k.
    """
    alpha = Fraction(alpha)
    a_root = _rational_root(alpha, e.nu)
    if a_root is None:
        raise ValueError(f"alpha={alpha} is not a perfect {e.nu}-th power")
    A_val = 1 / a_root
    zero = ParamPoly(e.field, {})
    coeffs = {k + e.nu: e.c(k).set_A(A_val) for k in range(-1, e.kmax + 1)}
    return GaugeSeries(e.nu, coeffs, e.kmax + e.nu, zero)


def _rational_root(q: Fraction, n: int):
    if q <= 0:
        return None

    def iroot(v):
        r = round(v ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == v:
                return cand
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
