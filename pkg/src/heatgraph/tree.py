"""Heat and random-walk kernels on the (q+1)-regular tree, and half-line diffusion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .bessel import bessel_poly, bessel_scaled
from .tables import KernelTable

__all__ = [
    "HalfLineParams",
    "halfline_diffusion",
    "halfline_oracle",
    "sphere_size",
    "tree_heat_kernel",
    "tree_heat_oracle",
    "tree_return_prob",
    "tree_rw_kernel",
]


def _check_query(q: int, r: int, t: int) -> None:
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if r < 0 or t < 0:
        raise ValueError(f"radius and time must be non-negative, got r={r}, t={t}")


def sphere_size(q: int, r: int) -> int:
    """Number of tree vertices at distance ``r`` from the root."""
    return 1 if r == 0 else (q + 1) * q ** (r - 1)


def tree_heat_kernel(q: int, r: int, t: int) -> Fraction:
    """Closed-form discrete-time heat kernel ``K_{q+1}(r; t)`` on the tree.

    The correction series over ``r + 2j`` stops at ``r + 2j <= t`` since the
    Bessel factor vanishes beyond it.
    """
    _check_query(q, r, t)
    tail = sum(bessel_scaled(q, r + 2 * j, t) for j in range(1, (t - r) // 2 + 1))
    return (-q) ** t * (bessel_scaled(q, r, t) - (q - 1) * tail)


def tree_heat_oracle(q: int, r_max: int, t_max: int) -> KernelTable:
    """Iterate the radial heat equation on the tree in exact integers.

    ``K(0; t+1) = -q K(0) + (q+1) K(1)`` and
    ``K(r; t+1) = -q K(r) + q K(r+1) + K(r-1)`` for ``r >= 1``.
    """
    _check_query(q, r_max, t_max)
    if r_max < t_max:
        raise ValueError(f"r_max={r_max} < t_max={t_max} would truncate the support")
    col = [1] + [0] * (r_max + 1)
    rows = [[v] for v in col[: r_max + 1]]
    for _ in range(t_max):
        new = [0] * (r_max + 2)
        new[0] = -q * col[0] + (q + 1) * col[1]
        for r in range(1, r_max + 1):
            new[r] = -q * col[r] + q * col[r + 1] + col[r - 1]
        col = new
        for r in range(r_max + 1):
            rows[r].append(col[r])
    return KernelTable(basepoint=0, t_max=t_max, values=tuple(tuple(r) for r in rows))


def tree_rw_kernel(q: int, r: int, t: int) -> Fraction:
    """Probability that the uniform walk from the root sits at a given vertex of radius ``r``."""
    _check_query(q, r, t)
    s = sum(comb(t, k) * Fraction(tree_heat_kernel(q, r, k), q**k) for k in range(r, t + 1))
    return Fraction(q, q + 1) ** t * s


def tree_return_prob(q: int, t: int) -> Fraction:
    """Return probability of the uniform walk on the tree after ``t`` steps.

    Evaluated from the Bessel double sum directly, not through
    :func:`tree_rw_kernel`, so the two can check each other.
    """
    _check_query(q, 0, t)
    total = Fraction(0)
    for k in range(t + 1):
        inner = bessel_scaled(q, 0, k) - (q - 1) * sum(
            bessel_scaled(q, 2 * j, k) for j in range(1, k // 2 + 1)
        )
        total += (-1) ** k * comb(t, k) * inner
    return Fraction(q, q + 1) ** t * total


@dataclass(frozen=True)
class HalfLineParams:
    """Step weights of the reflecting half-line walk: stay ``beta``, left ``alpha``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.alpha + self.beta < 1):
            raise ValueError(
                f"need alpha > 0, beta > 0, alpha + beta < 1; got {self.alpha}, {self.beta}"
            )


def halfline_diffusion(params: HalfLineParams, x: int, t: int) -> float:
    """Closed-form solution of the half-line diffusion with reflecting origin."""
    if x < 0 or t < 0:
        raise ValueError("x and t must be non-negative")
    alpha, beta = float(params.alpha), float(params.beta)
    gamma = 1.0 - alpha - beta
    rho = gamma / alpha
    a = 2.0 * math.sqrt(alpha * gamma) / beta
    value = rho ** (-x / 2) * bessel_poly(x, t, a)
    coef = (2 * alpha + beta - 1) / alpha
    for j in range(1, (t - x) // 2 + 1):
        value += coef * rho ** (-(x + 2 * j) / 2) * bessel_poly(x + 2 * j, t, a)
    return beta**t * value


def halfline_oracle(params: HalfLineParams, x_max: int, t_max: int) -> list[list[float]]:
    """Direct iteration of the half-line difference equation; returns ``rows[x][t]``."""
    if x_max < t_max:
        raise ValueError(f"x_max={x_max} < t_max={t_max} would truncate the support")
    alpha, beta = float(params.alpha), float(params.beta)
    gamma = 1.0 - alpha - beta
    col = [1.0] + [0.0] * (x_max + 1)
    rows = [[v] for v in col[: x_max + 1]]
    for _ in range(t_max):
        new = [0.0] * (x_max + 2)
        new[0] = beta * col[0] + (1.0 - beta) * col[1]
        for x in range(1, x_max + 1):
            new[x] = beta * col[x] + gamma * col[x + 1] + alpha * col[x - 1]
        col = new
        for x in range(x_max + 1):
            rows[x].append(col[x])
    return rows
