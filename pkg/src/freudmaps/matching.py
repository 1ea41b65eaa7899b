"""Match the center-manifold expansion against the rational ansatz for z_g.

The unknown numerator P of degree 3g-2 in::

    z_g = z0 (z0 - 1) P(z0) / (nu - (nu-1) z0)**(5g-1)

is fixed by equating Puiseux coefficients of z_g(z0(n)) with the slots
a_{(nu-1)m, g} read off the expansion at alpha = 1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .exactnum import QPoly, RadicalElem, RadicalField
from .freud import CmExpansion, OrderShortfall, cm_expand, k_nu
from .series import GaugeSeries, ser_mul, ser_pow, ser_recip
from .stringeq import z0_v_series

log = logging.getLogger(__name__)

__all__ = [
    "GenusSolution",
    "PartialFraction",
    "extract_slots",
    "extract_a",
    "ansatz_rows",
    "solve_beta",
    "derive_zg",
    "q_factor",
    "partial_fraction",
    "recursion_check",
    "RecursionReport",
    "q_roots",
    "interlaces",
    "overdetermination_check",
    "zm1_valuation",
    "divisibility_ok",
    "real_root_count",
    "recursion_prediction",
    "required_kmax",
]

Z = QPoly.x()


@dataclass(frozen=True)
class GenusSolution:
    nu: int
    g: int
    beta: tuple  # Fractions, P = sum beta[i] z0**i
    reduced: bool = False

    @property
    def P(self) -> QPoly:
        return QPoly(self.beta)

    @property
    def den_exponent(self) -> int:
        return 5 * self.g - 1

    @property
    def den_base(self) -> QPoly:
        return QPoly([self.nu, -(self.nu - 1)])

    def numerator(self) -> QPoly:
        return Z * (Z - 1) * self.P

    def denominator(self) -> QPoly:
        return self.den_base ** self.den_exponent

    def Q(self):
        return q_factor(self) if self.nu == 2 else None

    def to_json(self):
        from .exactnum import fmt_rational

        out = {"nu": self.nu, "g": self.g, "beta": [fmt_rational(b) for b in self.beta],
               "den_exponent": self.den_exponent, "reduced": self.reduced}
        if self.nu == 2:
            out["Q"] = [fmt_rational(c) for c in q_factor(self).coeffs]
        out["partial_fractions"] = {str(k): fmt_rational(v)
                                    for k, v in partial_fraction(self).by_power().items()}
        return out


@dataclass(frozen=True)
class PartialFraction:
    """z_g / z0 = sum_i a[i] * w**-(2g+i), w = nu - (nu-1) z0, i = 0..3g-1."""

    nu: int
    g: int
    a: tuple

    def by_power(self) -> dict:
        return {2 * self.g + i: c for i, c in enumerate(self.a)}

    @property
    def top(self) -> Fraction:
        return self.a[-1]

    def reconstruct(self) -> tuple:
        """(numerator, denominator) of z_g / z0 in z0."""
        w = QPoly([self.nu, -(self.nu - 1)])
        E = 5 * self.g - 1
        num = QPoly()
        for i, c in enumerate(self.a):
            num = num + (w ** (E - 2 * self.g - i)).scale(c)
        return num, w ** E


# -- slot extraction ---------------------------------------------------------

def required_kmax(nu: int, g: int, reduced: bool = False) -> int:
    if reduced:
        if nu != 2:
            raise ValueError("reduced mode is only defined for nu = 2")
        return 5 * g - 2
    return k_nu(nu, g)


def extract_slots(e: CmExpansion) -> dict:
    """All slots ``(g, m) -> a_{(nu-1)m, g}(1)`` present in the expansion.

    Every monomial of every c_k (A set to 1) must land in a slot.
    """
    nu = e.nu
    slots = {}
    for k in range(-1, e.kmax + 1):
        ck = e.c(k).set_A(1)
        for (eA, eB), coef in ck.terms.items():
            m = -eB
            rest = k + nu - (nu - 1) * m
            if m < 1 or rest < 0 or rest % (2 * nu):
                raise ArithmeticError(
                    f"c_{k} has monomial B^{eB} that fits no genus slot")
            slots[(rest // (2 * nu), m)] = coef
    return slots


def extract_a(e: CmExpansion, g: int) -> list:
    """[a_{(nu-1)m, g}(1) for m = 1..3g-1]."""
    need = k_nu(e.nu, g)
    if e.kmax < need:
        raise OrderShortfall(f"kmax={e.kmax} < {need} needed for genus {g}")
    slots = extract_slots(e)
    zero = e.field.zero()
    return [slots.get((g, m), zero) for m in range(1, 3 * g)]


# -- the linear system -------------------------------------------------------

def _v_prefactor(nu: int, g: int, M: int, reduced: bool):
    zv = z0_v_series(nu, M)
    f = zv.zero.field
    one = GaugeSeries(1, {0: f.one()}, M, zv.zero)
    zm1 = zv - one
    den = one * nu - zv * (nu - 1)
    pre = ser_mul(zv, zm1)
    if reduced:
        pre = ser_mul(zv, ser_pow(zm1, 2 * g))
    pre = ser_mul(pre, ser_pow(ser_recip(den), 5 * g - 1))
    return zv, pre


def ansatz_rows(nu: int, g: int, order: int | None = None, reduced: bool = False) -> list:
    """Row m (m = 1..order), column c: [v**m] prefactor(z0) * z0**c.

    ``v = n**(-(nu-1)/nu)``.  General mode has 3g-1 columns, reduced mode
    (nu = 2, (z0-1)**2g pulled out) has g.
    """
    ncols = g if reduced else 3 * g - 1
    order = ncols if order is None else order
    if order < 1:
        raise ValueError("order must be >= 1")
    zv, term = _v_prefactor(nu, g, order, reduced)
    rows = [[None] * ncols for _ in range(order)]
    for c in range(ncols):
        for m in range(1, order + 1):
            rows[m - 1][c] = term[m]
        term = ser_mul(term, zv)
    return rows


def _check_triangular(nu: int, g: int, rows: list, reduced: bool):
    f = RadicalField.for_valence(nu)
    n = len(rows[0])
    for i in range(n):
        m = i + 1
        for c in range(i + 1, n):
            if rows[i][c]:
                raise ArithmeticError(f"entry ({m},{c}) above the diagonal is nonzero")
        # (z0-1) leads with -1; the reduced prefactor (z0-1)**2g leads with +1
        sign = 1 if reduced else -1
        diag = f.theta(-m) * Fraction(sign, nu ** (5 * g - 1))
        if rows[i][i] != diag:
            raise ArithmeticError(f"diagonal entry {m}: {rows[i][i]} != {diag}")


def _solve_exact(rows: list, rhs: list) -> list:
    """Gauss-Jordan elimination over Q(theta); raises on a singular system."""
    n = len(rows)
    if any(len(r) != n for r in rows) or len(rhs) != n:
        raise ValueError("system must be square")
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular ansatz system")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col] ** -1
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                fct = M[i][col]
                M[i] = [x - fct * y for x, y in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


def solve_beta(nu: int, g: int, a: list, rows: list, reduced: bool = False) -> GenusSolution:
    _check_triangular(nu, g, rows, reduced)
    sol = _solve_exact(rows, list(a))
    beta = []
    for i, b in enumerate(sol):
        if not b.is_rational():
            raise ArithmeticError(f"beta_{i} = {b} is not rational")
        beta.append(b.rational())
    if reduced:
        P = QPoly(beta) * (Z - 1) ** (2 * g - 1)
        beta = list(P.coeffs) + [Fraction(0)] * (3 * g - 1 - len(P.coeffs))
    return GenusSolution(nu, g, tuple(beta), reduced)


def derive_zg(nu: int, g: int, reduced: bool = False,
              expansion: CmExpansion | None = None) -> GenusSolution:
    """Run the whole pipeline for one genus."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    need = required_kmax(nu, g, reduced)
    if nu == 3 and g == 2:
        log.info("nu=3 g=2: k_nu gives order %d; the stated computation went to n^(-20/3)", need)
    if expansion is None:
        expansion = cm_expand(nu, need)
    elif expansion.kmax < need:
        raise OrderShortfall(f"expansion kmax={expansion.kmax} < {need}")
    ncols = g if reduced else 3 * g - 1
    slots = extract_slots(expansion)
    zero = expansion.field.zero()
    a = [slots.get((g, m), zero) for m in range(1, ncols + 1)]
    rows = ansatz_rows(nu, g, ncols, reduced)
    return solve_beta(nu, g, a, rows, reduced)


def overdetermination_check(sol: GenusSolution, e: CmExpansion) -> int:
    """Compare the re-expanded z_g with every slot of its genus in ``e``.

    Returns the number of slots checked; raises on any mismatch.
    """
    slots = {m: v for (g, m), v in extract_slots(e).items() if g == sol.g}
    if not slots:
        return 0
    M = max(slots)
    rows = ansatz_rows(sol.nu, sol.g, M)
    for m in range(1, M + 1):
        pred = sum((r * b for r, b in zip(rows[m - 1], sol.beta)), e.field.zero())
        got = slots.get(m, e.field.zero())
        if pred != got:
            raise ArithmeticError(f"genus {sol.g} slot m={m}: predicted {pred}, expanded {got}")
    return M


# -- structure ---------------------------------------------------------------

def zm1_valuation(p: QPoly) -> int:
    """Multiplicity of the root z0 = 1."""
    if not p:
        raise ValueError("zero polynomial")
    k = 0
    while True:
        q, r = divmod(p, Z - 1)
        if r:
            return k
        p, k = q, k + 1


def divisibility_ok(sol: GenusSolution) -> bool:
    return zm1_valuation(sol.numerator()) >= ceil(Fraction(2 * sol.g, sol.nu - 1))


def q_factor(sol: GenusSolution) -> QPoly:
    if sol.nu != 2:
        raise ValueError("Q factorization is defined for nu = 2")
    q, r = divmod(sol.P, (Z - 1) ** (2 * sol.g - 1))
    if r:
        raise ArithmeticError(f"P for genus {sol.g} is not divisible by (z0-1)^{2 * sol.g - 1}")
    return q


def partial_fraction(sol: GenusSolution) -> PartialFraction:
    nu = sol.nu
    zsub = QPoly([Fraction(nu, nu - 1), Fraction(-1, nu - 1)])  # z0 in terms of w
    Nw = ((Z - 1) * sol.P).compose(zsub)
    L = 3 * sol.g - 1
    return PartialFraction(nu, sol.g, tuple(Nw[L - i] for i in range(L + 1)))


@dataclass
class RecursionReport:
    nu: int
    gmax: int
    tops: dict = field(default_factory=dict)
    predicted: dict = field(default_factory=dict)
    bad: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.bad


def recursion_prediction(nu: int, gmax: int) -> dict:
    """Top coefficients a_{3g-1}^{(g)} generated by the quadratic recursion."""
    nu = Fraction(nu)
    t = {1: nu**2 / 6}
    for g in range(1, gmax):
        s = sum(t[m] * t[g - m + 1] for m in range(1, g + 1))
        t[g + 1] = nu**3 * (25 * g * g - 1) / 6 * t[g] + nu / 2 * s
    return t


def recursion_check(nu: int, sols) -> RecursionReport:
    """Compare partial-fraction top coefficients against the recursion."""
    sols = {s.g: s for s in sols} if not isinstance(sols, dict) else sols
    gmax = max(sols)
    rep = RecursionReport(nu, gmax)
    rep.predicted = recursion_prediction(nu, gmax)
    for g in sorted(sols):
        rep.tops[g] = partial_fraction(sols[g]).top
        if rep.tops[g] != rep.predicted[g]:
            rep.bad.append(g)
    return rep


# -- real roots --------------------------------------------------------------

def _sturm_chain(p: QPoly) -> list:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        _, r = divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(-r)
    return chain


def _sign_changes(chain, x) -> int:
    signs = [s for s in (c(x) for c in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def real_root_count(p: QPoly) -> int:
    """Distinct real roots, exactly (Sturm)."""
    if p.degree < 1:
        return 0
    chain = _sturm_chain(p)
    bound = 1 + max(abs(c / p.coeffs[-1]) for c in p.coeffs[:-1])
    return _sign_changes(chain, -bound) - _sign_changes(chain, bound)


def q_roots(Q: QPoly, tol: float = 1e-10) -> list:
    """Sorted real roots; raises if any root is non-real beyond ``tol``."""
    import mpmath

    if Q.degree < 1:
        return []
    if real_root_count(Q) != Q.degree:
        raise ArithmeticError(f"{Q} does not have {Q.degree} distinct real roots")
    with mpmath.workdps(40):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator
                                  for c in reversed(Q.coeffs)], maxsteps=200, extraprec=200)
    out = []
    for z in roots:
        z = mpmath.mpc(z)
        if abs(z.imag) > tol:
            raise ArithmeticError(f"non-real root {z}")
        out.append(float(z.real))
    return sorted(out)


def interlaces(lo: list, hi: list) -> bool:
    """Roots ``lo`` (k of them) sit strictly between consecutive ``hi`` (k+1)."""
    if len(hi) != len(lo) + 1:
        return False
    return all(hi[i] < lo[i] < hi[i + 1] for i in range(len(lo)))
