from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freudmaps.exactnum import QPoly, RadicalField
from freudmaps.freud import OrderShortfall, cm_expand
from freudmaps.genfun import golden_expr, from_solution
from freudmaps.matching import (ansatz_rows, derive_zg, divisibility_ok, extract_a,
                                extract_slots, interlaces, overdetermination_check,
                                partial_fraction, q_roots, real_root_count, recursion_check,
                                recursion_prediction, solve_beta, zm1_valuation)
from freudmaps.matching import _check_triangular
from freudmaps.stringeq import z0_puiseux

F2 = RadicalField.for_valence(2)
Z = QPoly.x()


def test_genus1_slots():
    a = extract_a(cm_expand(2, 4), 1)
    assert a[0] == F2.theta() * Fraction(1, 72)  # 48/(1152 sqrt3)
    assert a[1] == F2.scalar(Fraction(-1, 144))


def test_extract_shortfall():
    with pytest.raises(OrderShortfall):
        extract_a(cm_expand(2, 3), 1)


@pytest.mark.parametrize("nu", [2, 3, 4])
def test_genus0_slots(nu):
    kmax = (nu - 1) * 6 - nu
    slots = extract_slots(cm_expand(nu, kmax))
    z = z0_puiseux(nu, (nu - 1) * 6)
    for m in range(1, 7):
        assert slots.get((0, m), z.zero) == z[(nu - 1) * m]


def test_genus1_system():
    rows = ansatz_rows(2, 1)
    assert rows[0] == [F2.theta() * Fraction(-1, 48), F2.zero()]  # -1/(16 sqrt3)
    assert rows[1] == [F2.scalar(Fraction(-1, 96)), F2.scalar(Fraction(-2, 96))]


@pytest.mark.parametrize("nu, g", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)])
def test_triangular_diagonal(nu, g):
    rows = ansatz_rows(nu, g)
    f = RadicalField.for_valence(nu)
    for i, row in enumerate(rows):
        m = i + 1
        assert row[i] == f.theta(-m) * Fraction(-1, nu ** (5 * g - 1))
        assert all(not c for c in row[i + 1:])


def test_triangular_check_rejects():
    rows = ansatz_rows(2, 2)
    rows[0][3] = F2.one()
    with pytest.raises(ArithmeticError):
        _check_triangular(2, 2, rows, False)


def test_z1():
    s = derive_zg(2, 1)
    assert s.beta == (Fraction(-2, 3), Fraction(2, 3))
    z1 = from_solution(s)
    want = (Z * (Z - 1) ** 2 * 2, QPoly([2, -1]) ** 4 * 3)
    assert z1.numerator * want[1] == want[0] * z1.denominator


def test_z2_numerator(sols2):
    P = sols2[2].P
    assert P == (Z - 1) ** 3 * (Z * 9 - 4) * Fraction(14, 9)


def test_z2_nu3():
    s = derive_zg(3, 2)
    assert s.beta == (Fraction(2673, 5), Fraction(-62451, 20), Fraction(25407, 4),
                      Fraction(-27386, 5), Fraction(8567, 5))
    assert from_solution(s).equals(golden_expr("z_nu3_g2", None, "form2"))


def test_z1_nu3():
    assert derive_zg(3, 1).beta == (Fraction(-9, 2), Fraction(5))


def test_q_polynomials(sols2):
    assert sols2[1].Q() == QPoly([Fraction(2, 3)])
    assert sols2[2].Q() == (Z * 9 - 4) * Fraction(14, 9)
    assert sols2[3].Q() == (Z * Z * 8097 - Z * 6616 + 444) * Fraction(4, 27)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_reduced_mode_agrees(sols2, g):
    assert derive_zg(2, g, reduced=True).beta == sols2[g].beta


def test_reduced_only_for_quartic():
    with pytest.raises(ValueError):
        derive_zg(3, 1, reduced=True)


def test_overdetermined_slots(exp2, sols2):
    for g in (1, 2, 3):
        assert overdetermination_check(sols2[g], exp2) > 0


def test_divisibility(sols2):
    for g, s in sols2.items():
        assert divisibility_ok(s)
        assert zm1_valuation(s.numerator()) >= 2 * g


def test_z1_partial_fractions():
    pf = partial_fraction(derive_zg(2, 1))
    # z1/z0 = 2/3 (w^-4 - 2 w^-3 + w^-2), w = 2 - z0
    assert pf.a == (Fraction(2, 3), Fraction(-4, 3), Fraction(2, 3))
    assert pf.top == Fraction(2, 3)


def test_partial_fraction_reconstructs(sols2):
    # z_g / z0 == num / den exactly
    for s in sols2.values():
        num, den = partial_fraction(s).reconstruct()
        assert (Z - 1) * s.P * den == num * s.denominator()


def test_recursion(sols2):
    assert recursion_prediction(2, 2)[1] == Fraction(2, 3)
    t2 = 8 * 4 * Fraction(2, 3) + Fraction(2, 3) ** 2
    assert recursion_prediction(2, 2)[2] == t2
    rep = recursion_check(2, sols2)
    assert rep.ok, rep.bad


def test_q_roots_examples(sols2):
    assert q_roots(sols2[2].Q()) == pytest.approx([4 / 9])
    r2 = q_roots(sols2[3].Q())
    assert len(r2) == 2 and all(0 < x < 1 for x in r2)
    assert interlaces([4 / 9], r2)


def test_q_roots_rejects_complex():
    with pytest.raises(ArithmeticError):
        q_roots(Z * Z + 1)


def test_interlace_lengths():
    assert not interlaces([0.5], [0.1])
    assert not interlaces([0.5], [0.6, 0.9])


@settings(max_examples=40)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5, unique=True))
def test_sturm_counts_distinct_roots(roots):
    p = QPoly([1])
    for r in roots:
        p = p * (Z - r)
    assert real_root_count(p) == len(roots)
    assert real_root_count(p * (Z * Z + 1)) == len(roots)


@settings(max_examples=30)
@given(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=2, max_size=5))
def test_solve_roundtrip(beta):
    # planting beta gives a right-hand side that solves back to beta
    g = 1 if len(beta) <= 2 else 2
    n = 3 * g - 1
    beta = (beta + [Fraction(0)] * n)[:n]
    rows = ansatz_rows(2, g)
    rhs = [sum((rows[i][j] * beta[j] for j in range(n)), F2.zero()) for i in range(n)]
    assert solve_beta(2, g, rhs, rows).beta == tuple(beta)
