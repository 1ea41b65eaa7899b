import mpmath
import pytest

from freudmaps.freud import build_freud, cm_expand
from freudmaps.orbitnum import (OrbitSample, PrecisionConfig, PrecisionError, cm_compare,
                                fit_slope, freud_residual, hankel_x, moment_rescaling_gap,
                                moments, rescaled_compare, rescaling_gap, stieltjes_x,
                                un_compare)

CFG = PrecisionConfig(bits=512)
TIGHT = mpmath.mpf(10) ** -40


def test_odd_moments_vanish():
    mu = moments(2, 1, 1, 4, CFG)
    assert all(mu[k] == 0 for k in range(1, 9, 2))


def test_gaussian_limit():
    with mpmath.workprec(512):
        mu = moments(2, 2, mpmath.mpf(10) ** -30, 1, CFG)
        assert abs(mu[0] - mpmath.sqrt(2 * mpmath.pi / 2)) < mpmath.mpf(10) ** -25


def test_first_ratio():
    h = hankel_x(2, 1, 1, 3, CFG)
    mu = moments(2, 1, 1, 3, CFG)
    with mpmath.workprec(512):
        assert abs(h.at(1) - mu[2] / mu[0]) < TIGHT


def test_moment_scaling():
    assert moment_rescaling_gap(2, 1, 1, 20, 2, CFG) < TIGHT
    assert moment_rescaling_gap(3, 1, 1, 10, 2, CFG) < TIGHT


def test_orbit_scaling():
    assert rescaling_gap(2, 1, 1, 80, 2, CFG) < TIGHT


def test_hankel_agrees_with_stieltjes(orbit400):
    h = hankel_x(2, 1, 1, 30, CFG)
    with mpmath.workprec(512):
        assert max(abs(h.at(n) - orbit400.at(n)) for n in range(1, 31)) < TIGHT


def test_residual(orbit400):
    res = freud_residual(orbit400)
    assert max(abs(v) for n, v in res.items() if n >= 2) < TIGHT


def test_residual_nu3():
    s = stieltjes_x(3, 1, 1, 60, CFG)
    res = freud_residual(s, build_freud(3))
    assert max(abs(v) for v in res.values()) < TIGHT


def test_low_precision_detected():
    with pytest.raises(PrecisionError):
        hankel_x(2, 1, 1, 60, PrecisionConfig(bits=128, tol=1e-20))


def test_config_validation():
    with pytest.raises(ValueError):
        PrecisionConfig(bits=64)
    with pytest.raises(ValueError):
        PrecisionConfig(bits=128)  # 1e-40 is out of reach


def test_positivity_enforced():
    with pytest.raises(PrecisionError):
        OrbitSample(2, 1, 1, [1, 2], [mpmath.mpf(1), mpmath.mpf(-1)], "test")


def test_fit_slope_exact_power():
    ns = [10, 20, 40, 80]
    assert fit_slope(ns, [mpmath.mpf(n) ** -1.5 for n in ns]) == pytest.approx(-1.5)


def test_each_term_lowers_the_slope(orbit400):
    e = cm_expand(2, 8)
    ns = list(range(50, 401, 25))
    s0 = cm_compare(orbit400, e, 0, ns).slope
    s3 = cm_compare(orbit400, e, 3, ns).slope
    assert s0 == pytest.approx(-0.5, abs=0.15)
    assert s3 == pytest.approx(-2.0, abs=0.15)


def test_u_series_error(orbit400):
    r = un_compare(orbit400, list(range(50, 401, 25)))
    assert r.ok(0.15), r.slope


@pytest.mark.slow
def test_rescaled_regime():
    e = cm_expand(2, 6)
    r = rescaled_compare(e, 3, [40, 80, 120, 160])
    assert r.ok(0.15), (r.slope, r.expected)


def test_m_beyond_expansion(orbit400):
    with pytest.raises(ValueError):
        cm_compare(orbit400, cm_expand(2, 2), 5)
