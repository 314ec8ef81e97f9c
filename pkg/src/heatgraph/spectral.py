"""Heat kernels on finite regular graphs and the trace formulas.

The exact integer kernel from iterating ``v <- (A - q Id) v`` is the ground
truth that the geodesic and spectral expansions are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .bessel import bessel_scaled
from .graphs import RegularGraph, b_from_c, closed_tailless_counts, count_geodesics_from
from .tables import KernelTable, fraction_str

__all__ = [
    "ContourDomainError",
    "GeneralTraceReport",
    "SpectralData",
    "TaylorCoefficients",
    "TraceReport",
    "admissible_interval",
    "contour_bessel_transform",
    "contour_bessel_transforms",
    "eigendecompose",
    "exact_trace_moments",
    "general_trace_check",
    "heat_kernel_diagonal",
    "heat_kernel_geometric",
    "heat_kernel_geometric_table",
    "heat_kernel_power",
    "heat_kernel_spectral",
    "trace_formula_check",
    "trace_shifted_powers",
]


# -- exact kernels ---------------------------------------------------------

def heat_kernel_power(graph: RegularGraph, x0: int, t_max: int) -> KernelTable:
    """Exact integer kernel ``K_X(x0, x; t)`` by iterating ``(A - q Id)``."""
    q = graph.q
    nbrs = graph.neighbors
    v = [0] * graph.vertex_count
    v[x0] = 1
    rows = [[x] for x in v]
    for _ in range(t_max):
        v = [sum(v[y] for y in nbrs[x]) - q * v[x] for x in range(graph.vertex_count)]
        for x, val in enumerate(v):
            rows[x].append(val)
    return KernelTable(x0, t_max, tuple(tuple(r) for r in rows))


def heat_kernel_geometric_table(graph: RegularGraph, x0: int, t_max: int) -> KernelTable:
    """Kernel from geodesic counts: ``(-q)^t sum_m b_m(x) q^(-m/2) I_m(t)``."""
    q = graph.q
    b = b_from_c(count_geodesics_from(graph, x0, t_max), q)
    rows = []
    for x in range(graph.vertex_count):
        row = []
        for t in range(t_max + 1):
            s = sum(b[m][x] * bessel_scaled(q, m, t) for m in range(t + 1))
            row.append((-q) ** t * s)
        rows.append(tuple(row))
    return KernelTable(x0, t_max, tuple(rows))


def heat_kernel_geometric(graph: RegularGraph, x0: int, x: int, t: int) -> Fraction:
    q = graph.q
    b = b_from_c(count_geodesics_from(graph, x0, t), q)
    return (-q) ** t * sum(b[m][x] * bessel_scaled(q, m, t) for m in range(t + 1))


def heat_kernel_diagonal(graph: RegularGraph, x0: int, t: int) -> Fraction:
    """Diagonal kernel written through tailless closed geodesics at ``x0``.

    ``(-q)^t (sum_m N_m(x0) q^(-m/2) I_m(t) + (1-q) sum_{j>=1} q^-j I_2j(t))``.
    This rewrites :func:`heat_kernel_geometric` using
    ``b_m(x0) = N_m(x0) + (1-q)[m even]``, which holds on vertex-transitive
    graphs but can fail at individual vertices of irregular-looking graphs.
    The sum over all basepoints is always correct (see
    :func:`trace_formula_check`).
    """
    q = graph.q
    per, _ = closed_tailless_counts(graph, t)
    s = sum(per[m][x0] * bessel_scaled(q, m, t) for m in range(t + 1))
    s += (1 - q) * sum(bessel_scaled(q, 2 * j, t) for j in range(1, t // 2 + 1))
    return (-q) ** t * s


# -- spectral data ---------------------------------------------------------

def exact_trace_moments(graph: RegularGraph, k_max: int) -> tuple[int, ...]:
    """``Tr(A^k)`` for ``k = 0..k_max`` in exact integers."""
    nbrs = graph.neighbors
    M = graph.vertex_count
    traces = [0] * (k_max + 1)
    for s in range(M):
        v = [0] * M
        v[s] = 1
        traces[0] += 1
        for k in range(1, k_max + 1):
            v = [sum(v[y] for y in nbrs[x]) for x in range(M)]
            traces[k] += v[s]
    return tuple(traces)


def trace_shifted_powers(graph: RegularGraph, t_max: int) -> tuple[int, ...]:
    """``Tr((q Id - A)^t)`` for ``t = 0..t_max`` in exact integers."""
    q = graph.q
    nbrs = graph.neighbors
    M = graph.vertex_count
    traces = [0] * (t_max + 1)
    for s in range(M):
        v = [0] * M
        v[s] = 1
        traces[0] += 1
        for t in range(1, t_max + 1):
            v = [q * v[x] - sum(v[y] for y in nbrs[x]) for x in range(M)]
            traces[t] += v[s]
    return tuple(traces)


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues (descending), orthonormal eigenvectors as columns, exact moments."""

    q: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    trace_moments: tuple[int, ...]

    def moment(self, k: int) -> float:
        return float(np.sum(self.eigenvalues**k))


def eigendecompose(graph: RegularGraph, moment_horizon: int = 12) -> SpectralData:
    A = graph.adjacency_matrix().astype(float)
    vals, vecs = np.linalg.eigh(A)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    residual = np.max(np.linalg.norm(A @ vecs - vecs * vals, axis=0))
    if residual > 1e-9 * graph.degree:
        raise np.linalg.LinAlgError(f"eigensolver residual {residual:.3g} too large")
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralData(graph.q, vals, vecs, exact_trace_moments(graph, moment_horizon))


def heat_kernel_spectral(spectral: SpectralData, x0: int, x: int, t: int) -> float:
    """``sum_j (lambda_j - q)^t psi_j(x) psi_j(x0)`` in binary64."""
    psi = spectral.eigenvectors
    return float(np.sum((spectral.eigenvalues - spectral.q) ** t * psi[x] * psi[x0]))


# -- trace formula with exact integer spectral side -------------------------

@dataclass
class TraceReport:
    """Per-``t`` comparison rows ``(t, lhs, rhs)`` with exact values."""

    rows: list = field(default_factory=list)

    @property
    def first_failure(self):
        for t, lhs, rhs in self.rows:
            if lhs != rhs:
                return t
        return None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "first_failure": self.first_failure,
            "rows": [
                {"t": t, "lhs": fraction_str(lhs), "rhs": fraction_str(rhs), "ok": lhs == rhs}
                for t, lhs, rhs in self.rows
            ],
        }


def trace_formula_check(graph: RegularGraph, t_max: int) -> TraceReport:
    """Compare ``q^-t Tr((q Id - A)^t)`` with the closed-geodesic expansion.

    Right side: ``sum_m N_m q^(-m/2) I_m(t) + M(1-q) sum_{j>=1} q^-j I_2j(t)``
    with ``I = I^(-2/sqrt q)``. Both sides are exact rationals.
    """
    q = graph.q
    M = graph.vertex_count
    traces = trace_shifted_powers(graph, t_max)
    _, N = closed_tailless_counts(graph, t_max)
    report = TraceReport()
    for t in range(t_max + 1):
        lhs = Fraction(traces[t], q**t)
        rhs = sum(N[m] * bessel_scaled(q, m, t) for m in range(t + 1))
        rhs += M * (1 - q) * sum(bessel_scaled(q, 2 * j, t) for j in range(1, t // 2 + 1))
        report.rows.append((t, lhs, rhs))
    return report


# -- general trace formula via contour integration -------------------------

class ContourDomainError(ValueError):
    """The contour radius or coefficient sequence is outside the admissible range."""


@dataclass(frozen=True)
class TaylorCoefficients:
    """A test sequence ``g(t)`` with ``H(w) = sum_t g(t) w^t``.

    ``radius`` is where ``H`` stops being holomorphic (``inf`` if entire);
    ``support`` is the last non-zero index for finite sequences.
    """

    name: str
    g: Callable[[int], float]
    H: Callable[[np.ndarray], np.ndarray]
    radius: float = math.inf
    support: int | None = None

    @classmethod
    def point_mass(cls, t0: int) -> "TaylorCoefficients":
        if t0 < 0:
            raise ValueError("point mass index must be non-negative")
        return cls(f"point_mass({t0})", lambda t: 1.0 if t == t0 else 0.0, lambda w: w**t0, math.inf, t0)

    @classmethod
    def geometric(cls, s: float) -> "TaylorCoefficients":
        if not 0 < s:
            raise ValueError("geometric ratio must be positive")
        return cls(f"geometric({s})", lambda t: s**t, lambda w: 1.0 / (1.0 - s * w), 1.0 / s)

    @classmethod
    def inverse_factorial(cls) -> "TaylorCoefficients":
        return cls("inverse_factorial", lambda t: 1.0 / math.factorial(t), np.exp)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "TaylorCoefficients":
        vals = [float(v) for v in values]
        if not vals:
            raise ValueError("empty coefficient list")

        def H(w):
            acc = np.zeros_like(np.asarray(w, dtype=complex))
            for v in reversed(vals):
                acc = acc * w + v
            return acc

        return cls("values", lambda t: vals[t] if t < len(vals) else 0.0, H, math.inf, len(vals) - 1)


def admissible_interval(q: int, coeffs: TaylorCoefficients | None = None, a: float | None = None) -> tuple[float, float]:
    """Open interval of contour radii ``(1/a, q/(3q+2))``.

    ``a`` defaults to ``4 + 2/q`` and is capped by the holomorphy radius of ``H``.
    """
    a_eff = 4.0 + 2.0 / q if a is None else float(a)
    if coeffs is not None:
        a_eff = min(a_eff, coeffs.radius)
    return 1.0 / a_eff, q / (3.0 * q + 2.0)


def _resolve_radius(q, coeffs, b, a):
    lo, hi = admissible_interval(q, coeffs, a)
    if not lo < hi:
        raise ContourDomainError(f"no admissible contour radius: need 1/a = {lo:.6g} < q/(3q+2) = {hi:.6g}")
    if b is None:
        return (lo + hi) / 2
    if not lo < b < hi:
        raise ContourDomainError(f"b = {b} outside the admissible interval ({lo:.6g}, {hi:.6g})")
    return float(b)


def _integrands(q: int, coeffs: TaylorCoefficients, b: float, nodes: int, m_max: int):
    """Trapezoid means of ``f_m(z) h(z)`` on ``|z| = b`` for ``m = 0..m_max`` and their peak sizes."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = b * np.exp(1j * theta)
    c = -2.0 / math.sqrt(q)
    h = coeffs.H(1.0 / z)
    one_minus = 1.0 - z
    root = np.sqrt(one_minus * one_minus - c * c * z * z)
    ratio = c * z / (one_minus + root)
    cur = h / root
    means = np.empty(m_max + 1)
    peaks = np.empty(m_max + 1)
    for m in range(m_max + 1):
        means[m] = cur.mean().real
        peaks[m] = np.abs(cur).max()
        cur = cur * ratio
    return means, peaks


def _check_nodes(nodes):
    if nodes is not None and (nodes < 256 or nodes & (nodes - 1)):
        raise ValueError(f"nodes must be a power of two >= 256, got {nodes}")


def contour_bessel_transforms(q: int, coeffs: TaylorCoefficients, m_max: int, b=None, nodes=None, a=None,
                              max_nodes: int = 1 << 16):
    """``sum_t g(t) I_m^(-2/sqrt q)(t)`` for ``m = 0..m_max`` by contour quadrature.

    With ``nodes=None`` the node count doubles from 256 until successive
    results agree within ``1e-12`` relative to the integrand size.
    Returns ``(values, peaks, b, nodes)``.
    """
    _check_nodes(nodes)
    b = _resolve_radius(q, coeffs, b, a)
    if nodes is not None:
        means, peaks = _integrands(q, coeffs, b, nodes, m_max)
        return means, peaks, b, nodes
    n = 256
    prev, peaks = _integrands(q, coeffs, b, n, m_max)
    while n < max_nodes:
        n *= 2
        cur, peaks = _integrands(q, coeffs, b, n, m_max)
        if np.all(np.abs(cur - prev) <= 1e-12 * np.maximum(peaks, 1e-300)):
            return cur, peaks, b, n
        prev = cur
    return prev, peaks, b, n


def contour_bessel_transform(m: int, q: int, coeffs: TaylorCoefficients, b=None, nodes=None, a=None) -> float:
    values, _, _, _ = contour_bessel_transforms(q, coeffs, m, b, nodes, a)
    return float(values[m])


@dataclass
class GeneralTraceReport:
    coefficients: str
    lhs: float
    lhs_closed_form: float
    rhs: float
    b: float
    nodes: int
    m_cut: int
    tolerance: float = 1e-8

    @property
    def rel_error(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), 1e-300)

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "coefficients": self.coefficients,
            "lhs": self.lhs,
            "lhs_closed_form": self.lhs_closed_form,
            "rhs": self.rhs,
            "rel_error": self.rel_error,
            "b": self.b,
            "nodes": self.nodes,
            "m_cut": self.m_cut,
            "passed": self.passed,
        }


def _spectral_side(q: int, eigenvalues: np.ndarray, coeffs: TaylorCoefficients, max_terms: int = 20000) -> float:
    """``sum_t g(t) sum_j (1 - lambda_j/q)^t`` summed term by term."""
    w = 1.0 - eigenvalues / q
    W = float(np.max(np.abs(w)))
    if coeffs.radius <= W:
        raise ContourDomainError(f"coefficients decay too slowly: radius {coeffs.radius} <= {W}")
    total = 0.0
    powers = np.ones_like(w)
    small = 0
    for t in range(max_terms):
        gt = coeffs.g(t)
        total += gt * float(np.sum(powers))
        if coeffs.support is not None and t >= coeffs.support:
            return total
        small = small + 1 if abs(gt) * W**t * len(w) < 1e-17 * max(abs(total), 1e-300) else 0
        if small >= 5:
            return total
        powers = powers * w
    raise ContourDomainError("spectral series did not converge")


def general_trace_check(graph: RegularGraph, coeffs: TaylorCoefficients, b=None, nodes=None, a=None,
                        tolerance: float = 1e-8, m_cap: int = 2000) -> GeneralTraceReport:
    """Compare both sides of the general trace formula for one test sequence.

    Spectral side: ``sum_t g(t) sum_j (1 - lambda_j/q)^t``.
    Geodesic side: ``sum_m N_m q^(-m/2) T_m + M(1-q) sum_{j>=1} q^-j T_2j`` with
    ``T_m = sum_t g(t) I_m(t)`` from the contour integral. The ``m`` series is
    cut once the bound ``M (q+1)^m q^(-m/2) max|f_m h|`` drops below ``1e-14``
    of the running total.
    """
    q = graph.q
    M = graph.vertex_count
    decomp = eigendecompose(graph)
    lhs = _spectral_side(q, decomp.eigenvalues, coeffs)
    lhs_closed = float(np.sum(coeffs.H((1.0 - decomp.eigenvalues / q).astype(complex))).real)

    values, peaks, b_used, n_used = contour_bessel_transforms(q, coeffs, m_cap, b, nodes, a)
    scale = max(abs(lhs), 1e-300)
    m_cut = None
    for m in range(m_cap + 1):
        if peaks[m] == 0:
            log_bound = -math.inf
        else:
            log_bound = math.log(M) + m * (math.log(q + 1) - 0.5 * math.log(q)) + math.log(peaks[m])
        if m > 0 and log_bound < math.log(1e-14 * scale):
            m_cut = m
            break
    if m_cut is None:
        raise ContourDomainError(f"geodesic series not below 1e-14 by m = {m_cap}")
    _, N = closed_tailless_counts(graph, m_cut)
    rhs = sum(float(N[m]) * q ** (-m / 2) * values[m] for m in range(m_cut + 1))
    rhs += M * (1 - q) * sum(q ** (-j) * values[2 * j] for j in range(1, m_cut // 2 + 1))
    return GeneralTraceReport(coeffs.name, lhs, lhs_closed, float(rhs), b_used, n_used, m_cut, tolerance)
