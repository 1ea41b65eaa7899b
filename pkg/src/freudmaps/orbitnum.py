"""High-precision recurrence coefficients for the weight

    w(lambda) = exp(-N (lambda**2/2 + r lambda**(2nu) / (2nu)))

and numerical checks of the center-manifold expansion against them.

Two routes to x_n = b_n**2:

* Hankel pivots, x_n = D_{n-2} D_n / D_{n-1}**2, for small n.  The moment
  matrix is badly conditioned, so this is only usable up to n ~ 40.
* Discretized Stieltjes: the measure is replaced by a trapezoid rule, which
  converges spectrally for this entire, super-Gaussian integrand, and the
  three-term recurrence is run on the nodes.  Stable to n in the hundreds.

Forward iteration of the Freud equation is never used: the positive orbit is
unstable under it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpfr

from .freud import CmExpansion, FreudPolynomial, build_freud

__all__ = [
    "PrecisionConfig",
    "PrecisionError",
    "OrbitSample",
    "moments",
    "hankel_x",
    "stieltjes_x",
    "orbit",
    "freud_residual",
    "rescaling_gap",
    "moment_rescaling_gap",
    "SlopeReport",
    "cm_compare",
    "un_compare",
    "rescaled_compare",
    "fit_slope",
]


class PrecisionError(ArithmeticError):
    """Working precision or quadrature resolution is insufficient."""


@dataclass(frozen=True)
class PrecisionConfig:
    bits: int = 512
    radius: float | None = None  # quadrature truncation; None = from tail bound
    step: float | None = None  # trapezoid spacing; None = automatic
    tol: float = 1e-40

    def __post_init__(self):
        if self.bits < 128:
            raise ValueError("precision must be at least 128 bits")
        if not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.tol < 2.0 ** (-self.bits + 16):
            raise ValueError(f"tolerance {self.tol} is below what {self.bits} bits can deliver")


@dataclass
class OrbitSample:
    nu: int
    N: object
    r: object
    n: list
    x: list  # mpmath mpf
    method: str = ""
    err_est: object = None  # largest relative change under grid refinement / extra bits
    bits: int = 512

    def __post_init__(self):
        bad = [k for k, v in zip(self.n, self.x) if not v > 0]
        if bad:
            raise PrecisionError(f"non-positive x_n at n={bad[0]}")

    def at(self, n: int):
        return self.x[n - self.n[0]]

    def to_rows(self, digits: int = 50):
        return [{"n": k, "x_n": mpmath.nstr(v, digits)} for k, v in zip(self.n, self.x)]


# -- plumbing --------------------------------------------------------------------

def _to_mpf(v) -> mpmath.mpf:
    m, e = v.as_mantissa_exp()
    with mpmath.workprec(max(v.precision, 53)):
        return mpmath.mpf((int(m), int(e)))


def _mpfr(v):
    if isinstance(v, mpmath.mpf):
        return mpfr(mpmath.nstr(v, 200, strip_zeros=False))
    return mpfr(str(v)) if not isinstance(v, (int, float)) else mpfr(v)


def _x_balance(nu, N, r, n):
    """Positive root of n/N = x + r C x**nu (large-n size of x_n)."""
    C = math.comb(2 * nu - 1, nu - 1)
    lo, hi = 0.0, n / N + 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid + r * C * mid**nu < n / N:
            lo = mid
        else:
            hi = mid
    return hi


def _scale(nu, N, r):
    """Natural length of the weight: where V reaches 1."""
    s = 1 / math.sqrt(N)
    if r:
        s = min(s, (2 * nu / (N * r)) ** (1 / (2 * nu)))
    return s


def _V(nu, N, r, L):
    return N * (L * L / 2 + r * L ** (2 * nu) / (2 * nu))


def _edge(nu, N, r, n):
    """Right end of the oscillatory region of p_n, padded by one length unit."""
    return 2 * math.sqrt(_x_balance(nu, N, r, max(n, 1))) + _scale(nu, N, r)


def _radius(nu, N, r, nmax, bits):
    """Truncation where p_n**2 w falls below 2**-(bits+64) of its bulk size."""
    target = (bits + 64) * math.log(2)
    edge = _edge(nu, N, r, nmax)
    Ve = _V(nu, N, r, edge)
    L, dL = edge, _scale(nu, N, r) / 8
    while _V(nu, N, r, L) - Ve - 2 * nmax * math.log(L / edge) < target:
        L += dL
    return L


def _step(nu, N, r, bits, nmax=1):
    """Trapezoid spacing: the integrand p_n**2 w has bandwidth ~ 2 * edge and a
    spectral tail decaying on the weight's length scale."""
    tail = (bits + 64) * math.log(2) / (0.8 * _scale(nu, N, r))
    return 2 * math.pi / (2 * _edge(nu, N, r, nmax) + tail)


def _nodes(nu, N, r, nmax, cfg):
    L = cfg.radius or _radius(nu, float(N), float(r), nmax, cfg.bits)
    h = cfg.step or _step(nu, float(N), float(r), cfg.bits, nmax)
    # a discrete measure with fewer support points than the degree cannot
    # carry the recurrence; keep the node count well above nmax
    h = min(h, L / (1.5 * nmax))
    Nq, rq, hq = _mpfr(N), _mpfr(r), mpfr(h)
    M = int(L / h) + 1
    lam = [hq * i for i in range(M)]
    w = [hq * gmpy2.exp(-Nq * (l * l / 2 + rq * l ** (2 * nu) / (2 * nu))) for l in lam]
    w[0] = w[0] / 2  # node 0 is shared between the two half lines
    return lam, w


# -- moments and Hankel pivots -----------------------------------------------------

def moments(nu: int, N, r, count: int, cfg: PrecisionConfig = PrecisionConfig()) -> list:
    """mu_0 .. mu_{2 count} (odd moments are exactly zero)."""
    if not (N > 0 and r >= 0):
        raise ValueError("need N > 0 and r >= 0")
    with gmpy2.context(gmpy2.get_context(), precision=cfg.bits + 32):
        lam, w = _nodes(nu, N, r, count, cfg)
        out = []
        powk = [mpfr(1)] * len(lam)
        sq = [l * l for l in lam]
        for k in range(2 * count + 1):
            if k % 2:
                out.append(mpmath.mpf(0))
                continue
            out.append(_to_mpf(2 * gmpy2.fsum([a * b for a, b in zip(w, powk)])))
            powk = [a * b for a, b in zip(powk, sq)]
    return out


def _hankel_pivots(mu, nmax, bits):
    with mpmath.workprec(bits):
        n = nmax + 1
        H = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                H[i, j] = mu[i + j]
        piv = []
        for k in range(n):
            p = H[k, k]
            if p <= 0:
                raise PrecisionError(f"Hankel pivot {k} lost positivity; raise the precision")
            piv.append(p)
            for i in range(k + 1, n):
                f = H[i, k] / p
                if f:
                    for j in range(k + 1, n):
                        H[i, j] -= f * H[k, j]
        return [piv[k] / piv[k - 1] for k in range(1, n)]


def hankel_x(nu: int, N, r, nmax: int, cfg: PrecisionConfig = PrecisionConfig()) -> OrbitSample:
    """x_1 .. x_nmax from Hankel determinant ratios, checked at extra precision."""
    extra = replace(cfg, bits=cfg.bits + 256)
    lo = _hankel_pivots(moments(nu, N, r, nmax, cfg), nmax, cfg.bits)
    hi = _hankel_pivots(moments(nu, N, r, nmax, extra), nmax, extra.bits)
    with mpmath.workprec(cfg.bits):
        err = max(abs(a - b) / b for a, b in zip(lo, hi))
        if err > cfg.tol:
            raise PrecisionError(
                f"Hankel route lost accuracy (rel. change {mpmath.nstr(err, 3)}); "
                f"use more than {cfg.bits} bits or smaller nmax")
        return OrbitSample(nu, N, r, list(range(1, nmax + 1)), hi, "hankel", err, cfg.bits)


# -- Stieltjes ---------------------------------------------------------------------

def _stieltjes(nu, N, r, nmax, cfg):
    with gmpy2.context(gmpy2.get_context(), precision=cfg.bits):
        lam, w = _nodes(nu, N, r, nmax, cfg)
        # p_k has parity k, so sums over lambda >= 0 are doubled
        v_prev = [mpfr(0)] * len(lam)
        nrm = gmpy2.sqrt(2 * gmpy2.fsum(w))
        v = [mpfr(1) / nrm] * len(lam)
        b_prev = mpfr(0)
        xs = []
        for _ in range(nmax):
            u = [l * a - b_prev * c for l, a, c in zip(lam, v, v_prev)]
            b2 = 2 * gmpy2.fsum([wi * t * t for wi, t in zip(w, u)])
            b = gmpy2.sqrt(b2)
            xs.append(_to_mpf(b2))
            v_prev, v, b_prev = v, [t / b for t in u], b
        return xs


def stieltjes_x(nu: int, N, r, nmax: int, cfg: PrecisionConfig = PrecisionConfig(),
                verify: bool = True) -> OrbitSample:
    """x_1 .. x_nmax by the discretized Stieltjes procedure.

    With ``verify`` the run is repeated on a grid refined by 4/5 and a wider
    radius; the largest relative change is the error estimate.
    """
    xs = _stieltjes(nu, N, r, nmax, cfg)
    err = None
    if verify:
        h = cfg.step or _step(nu, float(N), float(r), cfg.bits, nmax)
        L = cfg.radius or _radius(nu, float(N), float(r), nmax, cfg.bits)
        ref = _stieltjes(nu, N, r, nmax, replace(cfg, step=0.8 * h, radius=L + 1))
        with mpmath.workprec(cfg.bits):
            err = max(abs(a - b) / b for a, b in zip(xs, ref))
        if err > cfg.tol:
            raise PrecisionError(f"quadrature not converged (rel. change {mpmath.nstr(err, 3)})")
        xs = ref
    return OrbitSample(nu, N, r, list(range(1, nmax + 1)), xs, "stieltjes", err, cfg.bits)


def orbit(nu: int, N, r, nmax: int, cfg: PrecisionConfig = PrecisionConfig()) -> OrbitSample:
    return hankel_x(nu, N, r, nmax, cfg) if nmax <= 30 else stieltjes_x(nu, N, r, nmax, cfg)


# -- identities ----------------------------------------------------------------------

def freud_residual(sample: OrbitSample, freud: FreudPolynomial | None = None) -> dict:
    """{n: n/N - x_n - r M_nu(x)} for every n whose stencil is available."""
    freud = freud or build_freud(sample.nu)
    lo, hi = min(freud.offsets), max(freud.offsets)
    xs = {k: v for k, v in zip(sample.n, sample.x)}
    out = {}
    with mpmath.workprec(sample.bits):
        N, r = mpmath.mpf(sample.N), mpmath.mpf(sample.r)
        for n in sample.n:
            if n + hi > sample.n[-1]:
                break
            x = {j: (xs[n + j] if n + j >= 1 else mpmath.mpf(0)) for j in range(lo, hi + 1)}
            out[n] = n / N - x[0] - r * freud.evaluate(x)
    return out


def rescaling_gap(nu: int, N, r, nmax: int, sigma=2, cfg: PrecisionConfig = PrecisionConfig(),
                  ns=None) -> object:
    """max_n |sigma x_{n, sigma N, sigma**(nu-1) r} / x_{n,N,r} - 1|."""
    a = orbit(nu, N, r, nmax, cfg)
    b = orbit(nu, sigma * N, sigma ** (nu - 1) * r, nmax, cfg)
    ns = ns or a.n
    with mpmath.workprec(cfg.bits):
        return max(abs(sigma * b.at(n) / a.at(n) - 1) for n in ns)


def moment_rescaling_gap(nu: int, N, r, count: int, sigma=2,
                         cfg: PrecisionConfig = PrecisionConfig()) -> object:
    """max_k |sigma**((k+1)/2) mu_k(sigma N, sigma**(nu-1) r) / mu_k(N, r) - 1| (even k)."""
    a = moments(nu, N, r, count, cfg)
    b = moments(nu, sigma * N, sigma ** (nu - 1) * r, count, cfg)
    with mpmath.workprec(cfg.bits):
        s = mpmath.mpf(sigma)
        return max(abs(s ** (mpmath.mpf(k + 1) / 2) * b[k] / a[k] - 1)
                   for k in range(0, 2 * count + 1, 2))


# -- comparison with the expansion ---------------------------------------------------

@dataclass
class SlopeReport:
    m: int
    expected: float
    slope: float
    rows: list = field(default_factory=list)  # (n, value, abs_err)
    saturated: list = field(default_factory=list)

    @property
    def deviation(self) -> float:
        return self.slope - self.expected

    def ok(self, tol: float = 0.15) -> bool:
        return abs(self.deviation) <= tol

    def to_json(self):
        return {"m": self.m, "expected_slope": self.expected, "slope": self.slope,
                "saturated": self.saturated,
                "rows": [{"n": n, "cm_value": mpmath.nstr(v, 30), "abs_err": mpmath.nstr(e, 5)}
                         for n, v, e in self.rows]}


def fit_slope(ns, errs) -> float:
    """Least-squares slope of log(err) against log(n)."""
    ln = np.log(np.asarray(ns, dtype=float))
    le = np.array([float(mpmath.log(e)) for e in errs])
    return float(np.polyfit(ln, le, 1)[0])


def _report(m, expected, ns, vals, errs, floor):
    keep = [(n, v, e) for n, v, e in zip(ns, vals, errs) if e > floor]
    sat = [n for n, e in zip(ns, errs) if e <= floor]
    if len(keep) < 2:
        return SlopeReport(m, expected, float("nan"), list(zip(ns, vals, errs)), sat)
    slope = fit_slope([k[0] for k in keep], [k[2] for k in keep])
    return SlopeReport(m, expected, slope, list(zip(ns, vals, errs)), sat)


def _floor(sample):
    est = sample.err_est if sample.err_est is not None else mpmath.mpf(2) ** (-sample.bits)
    return 100 * est * max(sample.x)


def cm_compare(sample: OrbitSample, e: CmExpansion, m: int, ns=None) -> SlopeReport:
    """Error of the expansion truncated after c_m; expected slope -(m+1)/nu."""
    if m > e.kmax:
        raise ValueError(f"m={m} exceeds kmax={e.kmax}")
    ns = ns or sample.n
    vals, errs = [], []
    with mpmath.workprec(sample.bits):
        for n in ns:
            v = e.evaluate(n, mpmath.mpf(sample.N), mpmath.mpf(sample.r), m)
            vals.append(v)
            errs.append(abs(sample.at(n) - v))
        floor = _floor(sample)
    return _report(m, -(m + 1) / e.nu, ns, vals, errs, floor)


def un_compare(sample: OrbitSample, ns=None) -> SlopeReport:
    """u_n = -1/(r x_n) against its three-term expansion (nu = 2); slope -5/2."""
    if sample.nu != 2:
        raise ValueError("the u_n expansion is for nu = 2")
    ns = ns or sample.n
    vals, errs = [], []
    with mpmath.workprec(sample.bits):
        r = mpmath.mpf(sample.r)
        gamma = r / mpmath.mpf(sample.N)
        for n in ns:
            gn = gamma * n
            v = -mpmath.sqrt(3 / gn) - 1 / (2 * gn) - 1 / (8 * mpmath.sqrt(3) * gn ** 1.5)
            u = -1 / (r * sample.at(n))
            vals.append(v)
            errs.append(abs(u - v))
        floor = _floor(sample) * 10
    return _report(3, -2.5, ns, vals, errs, floor)


def rescaled_compare(e: CmExpansion, m: int, ns, alpha=1, xi=1,
                     cfg: PrecisionConfig = PrecisionConfig()) -> SlopeReport:
    """Fixed alpha = n/N and xi = n**(nu-1)/r; expected slope -(m+1+nu)/nu."""
    nu = e.nu
    vals, errs = [], []
    floor = mpmath.mpf(0)
    for n in ns:
        N = mpmath.mpf(n) / alpha
        r = mpmath.mpf(n) ** (nu - 1) / xi
        s = stieltjes_x(nu, N, r, n + 1, cfg)
        with mpmath.workprec(cfg.bits):
            v = e.evaluate(n, N, r, m)
            vals.append(v)
            errs.append(abs(s.at(n) - v))
            floor = max(floor, _floor(s))
    return _report(m, -(m + 1 + nu) / nu, list(ns), vals, errs, floor)
