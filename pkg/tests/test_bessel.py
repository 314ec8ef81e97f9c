import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatgraph import bessel
from heatgraph.qsurd import QSurd


def c_of(q):
    return QSurd(0, Fraction(-2, q), q)


def test_vanishes_above_diagonal():
    for c in (Fraction(1), Fraction(-1, 2), c_of(3)):
        assert bessel.bessel_poly(5, 3, c) == 0
        assert bessel.bessel_jacobi(5, 3, c) == 0


def test_zero_time():
    assert bessel.bessel_poly(0, 0, Fraction(7)) == 1
    assert bessel.bessel_poly(1, 0, Fraction(7)) == 0


def test_multinomial_matches_factorials():
    for t in range(12):
        for n in range(t + 1):
            for j in range((t - n) // 2 + 1):
                expect = math.factorial(t) // (
                    math.factorial(j) * math.factorial(t - 2 * j - n) * math.factorial(n + j)
                )
                assert bessel.multinomial_coefficient(t, j, n) == expect


@pytest.mark.parametrize("q", range(1, 10))
def test_low_order_closed_forms(q):
    inv_sqrt = QSurd.sqrt_power(q, -1)
    assert bessel.bessel_poly(0, 1, c_of(q)) == 1
    assert bessel.bessel_poly(1, 1, c_of(q)) == -inv_sqrt
    assert bessel.bessel_poly(2, 1, c_of(q)) == 0
    assert bessel.bessel_poly(0, 2, c_of(q)) == 1 + Fraction(2, q)
    assert bessel.bessel_poly(1, 2, c_of(q)) == -2 * inv_sqrt
    assert bessel.bessel_poly(2, 2, c_of(q)) == Fraction(1, q)
    assert bessel.bessel_poly(0, 3, c_of(q)) == 1 + Fraction(6, q)
    assert bessel.bessel_poly(1, 3, c_of(q)) == -3 * inv_sqrt - 3 * inv_sqrt / q
    assert bessel.bessel_poly(2, 3, c_of(q)) == Fraction(3, q)
    assert bessel.bessel_poly(3, 3, c_of(q)) == -QSurd.sqrt_power(q, -3)


def test_polynomial_degree():
    for t in range(10):
        for n in range(t + 1):
            coeffs = bessel.bessel_poly_coefficients(n, t)
            assert len(coeffs) - 1 == 2 * ((t - n) // 2) + n
            assert coeffs[-1] != 0


def test_jacobi_small_case():
    assert bessel.bessel_jacobi(2, 4, Fraction(1)) == Fraction(7, 4)
    assert bessel.bessel_poly(2, 4, Fraction(1)) == Fraction(7, 4)


def test_scaled_matches_surd_route():
    for q in (2, 3, 5):
        for t in range(8):
            for m in range(t + 1):
                direct = QSurd.sqrt_power(q, -m) * bessel.bessel_poly(m, t, c_of(q))
                assert direct == bessel.bessel_scaled(q, m, t)


def test_float_input_close_to_exact():
    for n, t in ((0, 10), (3, 11), (6, 6)):
        exact = bessel.bessel_poly(n, t, Fraction(3, 10))
        assert bessel.bessel_poly(n, t, 0.3) == pytest.approx(float(exact), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=20), st.integers(0, 15))
def test_recurrence_matches_polynomial(c, t):
    table = bessel.bessel_recurrence_table(t, t, c)
    for n in range(t + 1):
        assert table[n][t] == bessel.bessel_poly(n, t, c)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=20), st.integers(0, 12), st.integers(0, 12))
def test_parity_in_c(c, n, t):
    assert bessel.bessel_poly(n, t, -c) == (-1) ** n * bessel.bessel_poly(n, t, c)


@pytest.mark.parametrize("c", [0.5, -1.0, 1.0, -2 / math.sqrt(2), complex(0.3, 0.4)])
def test_generating_function_matches_series(c):
    z = np.array([0.05, -0.1, 0.2j, 0.12 + 0.05j])
    z = z[np.abs(z) < 0.9 / (1 + abs(c))]
    for n in (0, 1, 3):
        series = sum(complex(bessel.bessel_poly(n, t, c)) * z**t for t in range(120))
        assert np.allclose(bessel.generating_fn(n, c, z), series, rtol=1e-12, atol=1e-15)


def test_generating_function_domain():
    with pytest.raises(ValueError):
        bessel.generating_fn(0, 1.0, 0.5)
    with pytest.raises(ValueError):
        bessel.generating_fn(0, 0.0, 0.1)


def test_asymptotic_ratio_moderate_t():
    assert bessel.asymptotic_ratio(0, 1, 400) == pytest.approx(1, rel=5e-3)
    assert bessel.asymptotic_ratio(1, -1, 400) == pytest.approx(1, rel=5e-3)


def test_log_abs_huge():
    x = Fraction(10**400, 3)
    assert bessel.log_abs(x) == pytest.approx(400 * math.log(10) - math.log(3))


@pytest.mark.parametrize("d", [Fraction(1, 10), Fraction(1, 4), Fraction(3, 4), Fraction(2)])
def test_lattice_point_solution_matches_lattice_iteration(d):
    t_max = 12
    rows = bessel.lattice_diffusion_table(d, t_max)
    for t in range(t_max + 1):
        for x in range(-t_max, t_max + 1):
            assert rows[t][x + t_max] == bessel.lattice_point_solution(x, t, d)


def test_lattice_solution_excludes_half():
    with pytest.raises(ValueError):
        bessel.lattice_point_solution(0, 3, Fraction(1, 2))


def test_negative_orders_rejected():
    with pytest.raises(ValueError):
        bessel.bessel_poly(-1, 3, Fraction(1))
