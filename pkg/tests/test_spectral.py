import math
from fractions import Fraction

import numpy as np
import pytest

from heatgraph import graphs, spectral
from heatgraph.bessel import bessel_poly, bessel_surd
from heatgraph.qsurd import QSurd
from oracles import matrix_power_diag, suite, transitive_suite


def test_power_kernel_small_values():
    K4 = graphs.complete(4)
    table = spectral.heat_kernel_power(K4, 0, 2)
    assert table.column(0) == (1, 0, 0, 0)
    assert table[0, 1] == -2
    assert table[0, 2] == 7


@pytest.mark.parametrize("g", suite(), ids=lambda g: g.name)
def test_power_kernel_against_matrix_oracle(g):
    for t in (0, 1, 5, 9):
        diag = [spectral.heat_kernel_power(g, x, t)[x, t] for x in range(g.vertex_count)]
        assert diag == matrix_power_diag(g, t)


@pytest.mark.parametrize("g", suite() + [graphs.RegularGraph(2, 3, ((0, 0), (0, 1), (1, 1)))], ids=lambda g: g.name)
def test_mass_conservation(g):
    table = spectral.heat_kernel_power(g, 0, 12)
    assert all(table.column_sum(t) == 1 for t in range(13))


@pytest.mark.parametrize("g", suite(), ids=lambda g: g.name)
def test_geometric_expansion_matches(g):
    assert spectral.heat_kernel_geometric_table(g, 0, 9) == spectral.heat_kernel_power(g, 0, 9)


def test_geometric_examples():
    P, K4 = graphs.petersen(), graphs.complete(4)
    assert spectral.heat_kernel_geometric(P, 0, 0, 2) == 7
    assert spectral.heat_kernel_geometric(K4, 0, 1, 1) == 1
    assert spectral.heat_kernel_geometric(P, 0, 3, 0) == 0


@pytest.mark.parametrize("g", transitive_suite(), ids=lambda g: g.name)
def test_diagonal_formula_on_transitive_graphs(g):
    table = spectral.heat_kernel_power(g, 0, 12)
    for t in range(13):
        assert spectral.heat_kernel_diagonal(g, 0, t) == table[0, t]
    assert spectral.heat_kernel_diagonal(g, 0, 1) == -g.q


def test_diagonal_formula_fails_off_transitive_graphs():
    g = graphs.random_regular(12, 4, seed=1)
    table = spectral.heat_kernel_power(g, 0, 12)
    bad = [t for t in range(13) if spectral.heat_kernel_diagonal(g, 0, t) != table[0, t]]
    assert bad and bad[0] == 7


def _multiset(vals):
    return sorted(round(v, 8) for v in vals)


def test_known_spectra():
    assert _multiset(spectral.eigendecompose(graphs.complete(4)).eigenvalues) == [-1, -1, -1, 3]
    assert _multiset(spectral.eigendecompose(graphs.petersen()).eigenvalues) == [-2] * 4 + [1] * 5 + [3]
    c6 = spectral.eigendecompose(graphs.cycle(6)).eigenvalues
    assert _multiset(c6) == _multiset([2 * math.cos(2 * math.pi * k / 6) for k in range(6)])


@pytest.mark.parametrize("g", suite(), ids=lambda g: g.name)
def test_moments_and_orthonormality(g):
    sd = spectral.eigendecompose(g)
    assert sd.eigenvalues[0] == pytest.approx(g.degree)
    assert np.allclose(sd.eigenvectors.T @ sd.eigenvectors, np.eye(g.vertex_count), atol=1e-10)
    A = g.adjacency_matrix()
    for k in range(13):
        assert sd.trace_moments[k] == int(np.trace(np.linalg.matrix_power(A, k)))
        assert sd.moment(k) == pytest.approx(sd.trace_moments[k], rel=1e-6, abs=1e-6)


def test_spectral_kernel():
    K4, P = graphs.complete(4), graphs.petersen()
    sd = spectral.eigendecompose(K4)
    assert spectral.heat_kernel_spectral(sd, 0, 0, 2) == pytest.approx(7, rel=1e-6)
    sp = spectral.eigendecompose(P)
    exact = spectral.heat_kernel_power(P, 0, 12)
    for t in range(13):
        for x in range(10):
            assert spectral.heat_kernel_spectral(sp, 0, x, t) == pytest.approx(exact[x, t], rel=1e-6, abs=1e-6)
    assert spectral.heat_kernel_spectral(sp, 0, 4, 0) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("g", suite(), ids=lambda g: g.name)
def test_trace_formula(g):
    report = spectral.trace_formula_check(g, 12)
    assert report.passed, report.first_failure
    t0, lhs0, rhs0 = report.rows[0]
    assert lhs0 == rhs0 == g.vertex_count
    _, lhs1, _ = report.rows[1]
    assert lhs1 == g.vertex_count - Fraction(spectral.exact_trace_moments(g, 1)[1], g.q)


def test_trace_report_serializes_fractions():
    d = spectral.trace_formula_check(graphs.complete(4), 2).to_dict()
    assert d["rows"][2]["lhs"] == "7/1" and d["passed"]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_contour_recovers_bessel(q):
    for t in range(13):
        g = spectral.TaylorCoefficients.point_mass(t)
        values, _, _, _ = spectral.contour_bessel_transforms(q, g, 8, nodes=4096)
        for m in range(9):
            exact = float(bessel_surd(q, m, t))
            if m > t:
                assert abs(values[m]) < 1e-10
            else:
                assert values[m] == pytest.approx(exact, rel=1e-10)


def test_contour_inverse_factorial_series():
    q = 2
    g = spectral.TaylorCoefficients.inverse_factorial()
    c = QSurd(0, Fraction(-2, q), q)
    for m in (0, 1, 4):
        direct = sum(float(bessel_poly(m, t, c)) / math.factorial(t) for t in range(81))
        assert spectral.contour_bessel_transform(m, q, g) == pytest.approx(direct, rel=1e-10)


def test_admissible_interval_and_errors():
    lo, hi = spectral.admissible_interval(2)
    assert (lo, hi) == pytest.approx((0.2, 0.25))
    g = spectral.TaylorCoefficients.point_mass(2)
    with pytest.raises(spectral.ContourDomainError):
        spectral.contour_bessel_transform(0, 2, g, b=0.3)
    with pytest.raises(spectral.ContourDomainError):
        spectral.contour_bessel_transform(0, 2, g, b=0.1)
    with pytest.raises(ValueError):
        spectral.contour_bessel_transform(0, 2, g, nodes=1000)
    with pytest.raises(spectral.ContourDomainError):
        spectral.general_trace_check(graphs.petersen(), spectral.TaylorCoefficients.geometric(0.25))


def test_general_trace_point_mass_reduces_to_exact_formula():
    K4 = graphs.complete(4)
    report = spectral.general_trace_check(K4, spectral.TaylorCoefficients.point_mass(3))
    exact = spectral.trace_formula_check(K4, 3).rows[3][1]
    assert report.passed
    assert report.lhs == pytest.approx(float(exact), rel=1e-12)
    assert report.rhs == pytest.approx(float(exact), rel=1e-8)


def test_general_trace_value_list_and_explicit_radius():
    P = graphs.petersen()
    g = spectral.TaylorCoefficients.from_values([1.0, 0.5, 0.25, -0.125])
    report = spectral.general_trace_check(P, g, b=0.21, nodes=2048)
    assert report.passed and report.nodes == 2048 and report.b == 0.21
    assert report.lhs == pytest.approx(report.lhs_closed_form, rel=1e-12)
