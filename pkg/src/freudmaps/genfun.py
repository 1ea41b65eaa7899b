"""Generating functions of z0 (rational part plus logarithms) and map counts.

Counts come from Taylor coefficients of ``f(z0(x))`` where z0(x) solves the
string equation in the coupling x:

* 2-legged 4-valent (z family):  (-1)**j [r**j] z_g(z0(r))
* 4-valent, no legs (e family):  [s**j] e_g(z0(s)) / 4**j
* 3-valent, no legs:             [t**j] e_g(z0(t)) / 3**j
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import comb, factorial, prod

from .exactnum import QPoly, fmt_rational, parse_rational
from .series import CouplingSeries, cs_compose
from .stringeq import string_equation, z0_coupling_series

__all__ = [
    "GenFunExpr",
    "CountTable",
    "golden",
    "golden_expr",
    "golden_table",
    "from_solution",
    "counts_of",
    "z_counts",
    "e_counts",
    "e3_counts",
    "genus0_closed",
    "genus0_unlabeled",
    "e_partial_fraction",
    "a0_recurrence",
    "a0_recurrence_check",
    "top_coefficient_relation",
]

Z = QPoly.x()


def _poly(cs) -> QPoly:
    return QPoly([parse_rational(c) for c in cs])


@dataclass(frozen=True)
class GenFunExpr:
    """``numerator/denominator + sum c * log(arg_num/arg_den)`` in z0."""

    numerator: QPoly
    denominator: QPoly
    logs: tuple = ()

    def __post_init__(self):
        if self.denominator(Fraction(1)) == 0:
            raise ValueError("denominator vanishes at z0 = 1")
        for c, an, ad in self.logs:
            if ad(Fraction(1)) == 0 or an(Fraction(1)) != ad(Fraction(1)):
                raise ValueError("log argument must equal 1 at z0 = 1")

    @classmethod
    def from_data(cls, d: dict) -> "GenFunExpr":
        num = QPoly([parse_rational(d.get("const", "1"))])
        for cs, p in d.get("factors", []):
            num = num * _poly(cs) ** p
        den = _poly(d.get("den_base", [1])) ** d.get("den_power", 0)
        logs = tuple((parse_rational(c), _poly(a), _poly(b)) for c, a, b in d.get("logs", []))
        return cls(num, den, logs)

    def __call__(self, z):
        """Evaluate at a Fraction or mpmath number."""
        import mpmath

        val = self.numerator(z) / self.denominator(z)
        for c, an, ad in self.logs:
            val = val + c * mpmath.log(an(z) / ad(z))
        return val

    def equals(self, other: "GenFunExpr") -> bool:
        """Exact identity: cross-multiplied rational parts, same log terms."""
        if self.numerator * other.denominator != other.numerator * self.denominator:
            return False
        return _log_key(self.logs) == _log_key(other.logs)

    def rational_part(self) -> tuple:
        return self.numerator, self.denominator

    def taylor(self, series: CouplingSeries) -> CouplingSeries:
        return cs_compose(self, series)


def _log_key(logs):
    # normalize arguments to monic-free ratios: compare by cross products
    out = []
    for c, an, ad in logs:
        lead = ad.coeffs[-1]
        out.append((c, an.scale(1 / lead), ad.scale(1 / lead)))
    return sorted(out, key=lambda t: (t[0], t[1].coeffs, t[2].coeffs))


@dataclass
class CountTable:
    nu: object  # 2, 3 or "3v"
    family: str  # "z" or "e"
    g: int
    rows: list = field(default_factory=list)  # (j, Fraction)

    def as_dict(self) -> dict:
        return dict(self.rows)

    def labeled(self) -> list:
        base = 3 if self.nu == "3v" else 2 * self.nu
        return [(j, c * base**j * factorial(j)) for j, c in self.rows]

    def vertex_bound(self) -> Fraction:
        if self.nu == "3v":
            return Fraction(2 * self.g - 1, Fraction(1, 2))
        shift = 0 if self.family == "z" else 1
        return Fraction(2 * self.g - shift, self.nu - 1)

    def check(self) -> list:
        """Structural violations (empty when the table is sound)."""
        bad = []
        lb = self.vertex_bound()
        for j, c in self.rows:
            if j < lb and c != 0:
                bad.append(f"j={j}: nonzero below vertex bound {lb}")
            if self.nu == "3v" and j % 2 and c != 0:
                bad.append(f"j={j}: odd vertex count with nonzero count")
            if self.family == "z" and (c < 0 or c.denominator != 1):
                bad.append(f"j={j}: {c} is not a nonnegative integer")
        for j, c in self.labeled():
            if c.denominator != 1:
                bad.append(f"j={j}: labeled count {c} is not an integer")
        return bad

    def to_json(self):
        return {"nu": self.nu, "family": self.family, "g": self.g,
                "rows": [{"j": j, "count": fmt_rational(c)} for j, c in self.rows]}


# -- golden data ---------------------------------------------------------------

@lru_cache(maxsize=1)
def golden() -> dict:
    with resources.files("freudmaps").joinpath("data/golden.json").open() as fh:
        return json.load(fh)


def golden_expr(family: str, g, form: str | None = None) -> GenFunExpr:
    """family: ``z_nu2``, ``e_nu2``, ``e_3v``, ``z_nu3_g2``, ``z_trivalent_g2``."""
    d = golden()[family]
    key = form if form is not None else str(g)
    if key not in d:
        raise KeyError(f"no golden {family} entry for {key}")
    return GenFunExpr.from_data(d[key])


def golden_table(name: str, g: int) -> dict:
    """name: ``z_nu2``, ``e_nu2``, ``e_3v``; returns {j: Fraction}."""
    col = golden()[f"table_{name}"][str(g)]
    return {int(j): parse_rational(v) for j, v in col.items()}


def from_solution(sol) -> GenFunExpr:
    return GenFunExpr(sol.numerator(), sol.denominator())


# -- counts --------------------------------------------------------------------

@lru_cache(maxsize=32)
def _z0(nu, coupling, J):
    return z0_coupling_series(string_equation(nu, coupling), J)


def counts_of(expr: GenFunExpr, nu, family: str, g: int, jmax: int) -> CountTable:
    if family == "z":
        ser = expr.taylor(_z0(nu, "r", jmax))
        rows = [(j, (-1) ** j * ser[j]) for j in range(1, jmax + 1)]
    elif nu == "3v":
        ser = expr.taylor(_z0("3v", "t", jmax))
        rows = [(j, ser[j] / 3**j) for j in range(1, jmax + 1)]
    else:
        ser = expr.taylor(_z0(nu, "s", jmax))
        rows = [(j, ser[j] / (2 * nu) ** j) for j in range(1, jmax + 1)]
    return CountTable(nu, family, g, rows)


def z_counts(source, jmax: int, nu: int = 2) -> CountTable:
    """Counts of unlabeled 2-legged 2nu-valent g-maps.

    ``source`` is a GenusSolution, a GenFunExpr, or a genus (golden, nu=2).
    """
    if isinstance(source, int):
        g = source
        expr = GenFunExpr(Z, QPoly([1])) if g == 0 else golden_expr("z_nu2", g)
    elif isinstance(source, GenFunExpr):
        g, expr = -1, source
    else:
        g, nu, expr = source.g, source.nu, from_solution(source)
    return counts_of(expr, nu, "z", g, jmax)


def e_counts(g: int, jmax: int) -> CountTable:
    return counts_of(golden_expr("e_nu2", g), 2, "e", g, jmax)


def e3_counts(g: int, jmax: int) -> CountTable:
    if g not in (0, 1, 2):
        raise ValueError("trivalent e_g are known for g = 0, 1, 2")
    return counts_of(golden_expr("e_3v", g), "3v", "e", g, jmax)


def genus0_closed(nu: int, j: int) -> Fraction:
    """Labeled count of 2nu-valent planar maps with j vertices."""
    if j < 1:
        raise ValueError("j must be >= 1")
    C = comb(2 * nu - 1, nu - 1)
    return Fraction((2 * nu * C) ** j * factorial(nu * j - 1), factorial((nu - 1) * j + 2))


def genus0_unlabeled(nu: int, j: int) -> Fraction:
    return genus0_closed(nu, j) / ((2 * nu) ** j * factorial(j))


# -- partial fractions of e_g and the a0 recurrence ----------------------------

def e_partial_fraction(g: int) -> dict:
    """e_g = sum_i a_i (2 - z0)**-i  (g >= 2); returns {i: a_i}."""
    if g < 2:
        raise ValueError("partial-fraction ladder defined for g >= 2")
    d = golden()["e_nu2"][str(g)]
    expr = GenFunExpr.from_data(d)
    E = d["den_power"]
    # numerator in w = 2 - z0, divided by the constant the denominator carries
    zsub = QPoly([2, -1])
    num_w = expr.numerator.compose(zsub)
    scale = expr.denominator.compose(zsub)[E]  # denominator is scale * w**E
    if num_w.degree > E:
        raise ArithmeticError("e_g has a polynomial part beyond a constant")
    return {E - k: num_w[k] / scale for k in range(E + 1)}


def a0_recurrence(gmax: int) -> dict:
    """Constant terms a_0^{(g)}, g = 2..gmax, generated by the recurrence."""
    a = {}
    for g in range(2, gmax + 1):
        s = Fraction(0)
        for k in range(2, g):
            p = prod(2 - 2 * k - j for j in range(0, 2 * g - 2 * k + 2))
            s += Fraction(p) * a[k] / factorial(2 * g - 2 * k + 2)
        a[g] = -2 * factorial(2 * g - 3) * (
            Fraction(1, factorial(2 * g + 2)) - Fraction(1, 12 * factorial(2 * g))
            + s / factorial(2 * g - 1))
    return a


def a0_recurrence_check(gmax: int = 7) -> dict:
    """{g: (closed-form a_0, recurrence a_0, agree)}."""
    rec = a0_recurrence(gmax)
    return {g: (e_partial_fraction(g)[0], rec[g], e_partial_fraction(g)[0] == rec[g])
            for g in range(2, gmax + 1)}


def top_coefficient_relation(g: int, z_top: Fraction) -> tuple:
    """(top e_g coefficient, value predicted from the z_g/z0 top coefficient).

    The top pole of e_g, order 5g-5, is fixed by that of z_g/z0, order 5g-1:
    e_top = z_top / (4 (5g-5)(5g-3)).  Recovered by fitting the two ladders
    for g = 2..7 (the ratio is quadratic in g).
    """
    pf = e_partial_fraction(g)
    return pf[5 * g - 5], _e_top_from_z(g, z_top)


def _e_top_from_z(g, z_top):
    return z_top / (4 * (5 * g - 5) * (5 * g - 3))
