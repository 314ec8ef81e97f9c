"""Recovering closed-geodesic counts from spectral data.

Two exact routes over ``Q(sqrt q)``:

* inverting the lower-triangular Bessel system ``B T = V N~ - E`` built from
  the trace formula, where ``N~_m = q^(-m/2) N_m``;
* the Chebyshev identity
  ``N~_l = 2 Tr T_l(A / (2 sqrt q)) + [l even] (q-1) q^(-l/2) M`` for ``l >= 1``.

A third routine recovers the per-vertex coefficients ``b_m(x)`` from kernel
values by forward substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .bessel import bessel_scaled, bessel_surd
from .graphs import RegularGraph, closed_tailless_counts, hashimoto_traces
from .qsurd import QSurd
from .spectral import exact_trace_moments, heat_kernel_power

__all__ = [
    "CountingSystem",
    "build_system",
    "chebyshev_coefficients",
    "chebyshev_counts",
    "closed_form_counts",
    "counting_report",
    "forward_substitute",
    "invert_V",
    "mat_mul",
    "recover_b_from_kernel",
    "recover_counts",
]

Matrix = list[list[QSurd]]


def _zero(q: int) -> QSurd:
    return QSurd(0, 0, q)


def _identity(n: int, q: int) -> Matrix:
    return [[QSurd(1 if i == j else 0, 0, q) for j in range(n)] for i in range(n)]


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    n, k, p = len(X), len(Y), len(Y[0])
    q = X[0][0].q
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = _zero(q)
            for r in range(k):
                if X[i][r] and Y[r][j]:
                    acc = acc + X[i][r] * Y[r][j]
            row.append(acc)
        out.append(row)
    return out


def _mat_vec(X: Matrix, v: list[QSurd]) -> list[QSurd]:
    q = v[0].q
    out = []
    for row in X:
        acc = _zero(q)
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


@dataclass(frozen=True)
class CountingSystem:
    """Linear system ``B T = V N~ - E`` of size ``(t_max+1)``, 0-based indices.

    ``V[j][k] = I_k(j)`` and ``B[j][k] = C(j,k) (-2/sqrt q)^k`` are lower
    triangular; ``T[k] = Tr((A/(2 sqrt q))^k)``;
    ``E[k] = M (q-1) sum_{i>=1} q^-i I_2i(k)`` (only the ``i = 1`` term when
    built with ``full_correction=False``). ``I = I^(-2/sqrt q)``.
    """

    q: int
    M: int
    t_max: int
    V: tuple
    B: tuple
    T: tuple
    E: tuple

    @property
    def D(self) -> Matrix:
        n = self.t_max + 1
        return [[self.V[i][i] if i == j else _zero(self.q) for j in range(n)] for i in range(n)]

    @property
    def V_strict(self) -> Matrix:
        n = self.t_max + 1
        return [[self.V[i][j] if j < i else _zero(self.q) for j in range(n)] for i in range(n)]


def build_system(graph: RegularGraph, t_max: int, full_correction: bool = True) -> CountingSystem:
    q, M = graph.q, graph.vertex_count
    n = t_max + 1
    V = tuple(tuple(bessel_surd(q, k, j) for k in range(n)) for j in range(n))
    step = QSurd(0, Fraction(-2, q), q)  # -2/sqrt(q)
    B = tuple(
        tuple(step**k * comb(j, k) if k <= j else _zero(q) for k in range(n)) for j in range(n)
    )
    moments = exact_trace_moments(graph, t_max)
    T = tuple(QSurd.sqrt_power(q, -k) * Fraction(moments[k], 2**k) for k in range(n))
    E = []
    for k in range(n):
        top = k // 2 if full_correction else min(1, k // 2)
        s = sum((bessel_scaled(q, 2 * i, k) for i in range(1, top + 1)), Fraction(0))
        E.append(QSurd(M * (q - 1) * s, 0, q))
    return CountingSystem(q, M, t_max, V, B, T, tuple(E))


def invert_V(system: CountingSystem) -> Matrix:
    """``V^-1 = (sum_{h=0}^{t_max} (-D^-1 V~)^h) D^-1`` using nilpotency of ``D^-1 V~``."""
    q = system.q
    n = system.t_max + 1
    D_inv = [[system.V[i][i].inverse() if i == j else _zero(q) for j in range(n)] for i in range(n)]
    step = mat_mul(D_inv, system.V_strict)
    step = [[-x for x in row] for row in step]
    total = _identity(n, q)
    power = _identity(n, q)
    for _ in range(system.t_max):
        power = mat_mul(power, step)
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, power)]
    return mat_mul(total, D_inv)


def forward_substitute(L, rhs: list) -> list:
    """Solve ``L x = rhs`` for lower-triangular ``L``."""
    x = []
    for i, row in enumerate(L):
        acc = rhs[i]
        for j in range(i):
            if row[j]:
                acc = acc - row[j] * x[j]
        x.append(acc / row[i])
    return x


def _to_counts(scaled: list[QSurd], q: int, start: int = 0) -> list[int]:
    out = []
    for k, val in enumerate(scaled, start):
        n = QSurd.sqrt_power(q, k) * val
        if not n.is_rational:
            raise ArithmeticError(f"count {k} has surd part {n.b}")
        f = n.to_fraction()
        if f.denominator != 1 or f < 0:
            raise ArithmeticError(f"count {k} = {f} is not a non-negative integer")
        out.append(int(f))
    return out


def recover_counts(system: CountingSystem, check: bool = True) -> list[int]:
    """``N_k = q^(k/2) [V^-1 (B T + E)]_k`` for ``k = 0..t_max``.

    With ``check`` the nilpotent-series inverse is verified against ``V`` and
    the solution against plain forward substitution.
    """
    rhs = [a + e for a, e in zip(_mat_vec([list(r) for r in system.B], list(system.T)), system.E)]
    V_inv = invert_V(system)
    scaled = _mat_vec(V_inv, rhs)
    if check:
        if mat_mul([list(r) for r in system.V], V_inv) != _identity(system.t_max + 1, system.q):
            raise ArithmeticError("V times its series inverse is not the identity")
        if forward_substitute(system.V, rhs) != scaled:
            raise ArithmeticError("series inverse disagrees with forward substitution")
    return _to_counts(scaled, system.q)


def chebyshev_coefficients(ell_max: int) -> list[list[int]]:
    """Integer coefficients of ``T_0..T_ell_max`` (index = power of x)."""
    polys = [[1], [0, 1]]
    for _ in range(2, ell_max + 1):
        a, b = polys[-1], polys[-2]
        nxt = [0] + [2 * c for c in a]
        for i, c in enumerate(b):
            nxt[i] -= c
        polys.append(nxt)
    return polys[: ell_max + 1]


def chebyshev_counts(graph: RegularGraph, ell_max: int) -> list[int | None]:
    """Tailless closed-geodesic totals from Chebyshev polynomials of ``A``.

    Index 0 is ``None``: the identity only holds for ``l >= 1``.
    """
    graph.require_simple()
    q, M = graph.q, graph.vertex_count
    moments = exact_trace_moments(graph, ell_max)
    polys = chebyshev_coefficients(ell_max)
    out: list[int | None] = [None]
    for ell in range(1, ell_max + 1):
        tr = sum(
            (QSurd.sqrt_power(q, -i) * Fraction(c * moments[i], 2**i) for i, c in enumerate(polys[ell]) if c),
            _zero(q),
        )
        val = 2 * tr
        if ell % 2 == 0:
            val = val + QSurd.sqrt_power(q, -ell) * ((q - 1) * M)
        out.extend(_to_counts([val], q, start=ell))
    return out


def closed_form_counts(graph: RegularGraph) -> list[int]:
    """``N_0..N_3`` from the low-order closed forms in trace moments."""
    q, M = graph.q, graph.vertex_count
    tr = exact_trace_moments(graph, 3)
    return [M, tr[1], tr[2] - M * (q + 1), tr[3] - 3 * q * tr[1]]


def recover_b_from_kernel(graph: RegularGraph, x0: int, x: int, m_max: int) -> list:
    """Solve ``K(x0,x;t) = (-q)^t sum_{m<=t} b_m(x) q^(-m/2) I_m(t)`` for ``b_0..b_m_max``."""
    q = graph.q
    kernel = heat_kernel_power(graph, x0, m_max)
    b = []
    for t in range(m_max + 1):
        acc = Fraction(kernel[x, t], (-q) ** t)
        acc -= sum(b[m] * bessel_scaled(q, m, t) for m in range(t))
        val = acc / bessel_scaled(q, t, t)
        b.append(int(val) if val.denominator == 1 else val)
    return b


def counting_report(graph: RegularGraph, m_max: int) -> dict:
    """All recovery routes side by side; ``agree`` is exact equality."""
    inversion = recover_counts(build_system(graph, m_max))
    cheb = chebyshev_counts(graph, m_max)
    _, dp = closed_tailless_counts(graph, m_max)
    dp = list(dp)
    hashimoto = hashimoto_traces(graph, m_max)
    agree = (
        inversion == dp
        and all(cheb[m] == dp[m] for m in range(1, m_max + 1))
        and hashimoto[1:] == dp[1:]
    )
    return {
        "N": dp,
        "route_inversion": inversion,
        "route_chebyshev": cheb,
        "route_dp": dp,
        "route_hashimoto": [None] + hashimoto[1:],
        "agree": agree,
    }
