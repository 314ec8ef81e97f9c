"""Discrete I-Bessel functions ``I_n^c(t)``.

The explicit polynomial is cross-checked against the Jacobi-coefficient
form and a forward recursion in ``t``. The closed-form generating function
and the large-``t`` asymptotic are also here.

Evaluation is exact whenever ``c`` is an ``int``, ``Fraction`` or
:class:`~heatgraph.qsurd.QSurd`; ``float``/``complex`` inputs use binary64.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .qsurd import QSurd

__all__ = [
    "asymptotic_estimate",
    "asymptotic_ratio",
    "bessel_jacobi",
    "bessel_poly",
    "bessel_poly_coefficients",
    "bessel_recurrence_table",
    "bessel_scaled",
    "bessel_surd",
    "generalized_binomial",
    "generating_fn",
    "lattice_diffusion_table",
    "log_abs",
    "multinomial_coefficient",
    "lattice_point_solution",
]


def _is_inexact(c) -> bool:
    return isinstance(c, (float, complex, np.floating, np.complexfloating))


def _normalize(c):
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, (np.floating, np.complexfloating)):
        return complex(c) if isinstance(c, np.complexfloating) else float(c)
    return c


def _check_orders(n: int, t: int) -> None:
    if n < 0 or t < 0:
        raise ValueError(f"order and time must be non-negative, got n={n}, t={t}")


@lru_cache(maxsize=None)
def multinomial_coefficient(t: int, j: int, n: int) -> int:
    """``t! / (j! (t-2j-n)! (n+j)!)``, zero when ``t-2j-n < 0``."""
    k = 2 * j + n
    if k > t:
        return 0
    return comb(t, k) * comb(k, j)


def _horner(coeffs, x):
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = acc * x + a
    return acc


def bessel_poly(n: int, t: int, c):
    """Evaluate ``I_n^c(t)`` from its explicit polynomial form.

    ``sum_{j=0}^{l} t!/(j!(t-2j-n)!(n+j)!) (c/2)^(2j+n)`` with
    ``l = floor((t-n)/2)``; identically zero for ``n > t``.
    """
    _check_orders(n, t)
    c = _normalize(c)
    if n > t:
        return c * 0
    ell = (t - n) // 2
    coeffs = [multinomial_coefficient(t, j, n) for j in range(ell + 1)]
    if isinstance(c, Fraction):
        # clear denominators so the whole sum is a single integer
        p, s = c.numerator, 2 * c.denominator
        p2, s2 = p * p, s * s
        total = 0
        pj, sj = 1, s2**ell
        for j, a in enumerate(coeffs):
            total += a * pj * sj
            pj *= p2
            if j < ell:
                sj //= s2
        return Fraction(total * p**n, s ** (2 * ell + n))
    half = c / 2
    h2 = half * half
    if isinstance(h2, QSurd) and h2.is_rational:
        h2 = h2.to_fraction()
    return _horner(coeffs, h2) * half**n


def bessel_poly_coefficients(n: int, t: int) -> list[Fraction]:
    """Coefficients of ``I_n^c(t)`` as a polynomial in ``c`` (index = power)."""
    _check_orders(n, t)
    if n > t:
        return [Fraction(0)]
    ell = (t - n) // 2
    out = [Fraction(0)] * (2 * ell + n + 1)
    for j in range(ell + 1):
        out[2 * j + n] = Fraction(multinomial_coefficient(t, j, n), 2 ** (2 * j + n))
    return out


@lru_cache(maxsize=None)
def bessel_scaled(q: int, m: int, t: int) -> Fraction:
    """Exact ``q^(-m/2) * I_m^(-2/sqrt(q))(t)``.

    The half-integer powers of ``q`` cancel: the value is
    ``(-1)^m sum_j t!/(j!(t-2j-m)!(m+j)!) q^-(j+m)``.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    _check_orders(m, t)
    if m > t:
        return Fraction(0)
    ell = (t - m) // 2
    total = sum(multinomial_coefficient(t, j, m) * q ** (ell - j) for j in range(ell + 1))
    return Fraction((-1) ** m * total, q ** (ell + m))


def bessel_surd(q: int, m: int, t: int) -> QSurd:
    """Exact ``I_m^(-2/sqrt(q))(t)`` as an element of Q(sqrt(q))."""
    return QSurd.sqrt_power(q, m) * bessel_scaled(q, m, t)


@lru_cache(maxsize=4096)
def generalized_binomial(x, m: int):
    """``x (x-1) ... (x-m+1) / m!`` for rational (or real) ``x``."""
    if m < 0:
        return 0
    num = Fraction(1) if not _is_inexact(x) else 1.0
    for i in range(m):
        num *= x - i
    return num / math.factorial(m)


def bessel_jacobi(n: int, t: int, c):
    """Evaluate ``I_n^c(t)`` through the Jacobi-polynomial coefficient form.

    The binomial with half-integer upper index ``l - (-1)^(t-n)/2`` is taken as
    a generalized (falling factorial) binomial coefficient.
    """
    _check_orders(n, t)
    c = _normalize(c)
    if n > t:
        return c * 0
    ell = (t - n) // 2
    upper = Fraction(2 * ell - (-1) ** (t - n), 2)
    c2 = c * c
    if isinstance(c2, QSurd) and c2.is_rational:
        c2 = c2.to_fraction()
    inexact = _is_inexact(c)
    coeffs = []
    for m in range(ell + 1):
        w = generalized_binomial(upper, m) * comb(ell + n, ell - m)
        coeffs.append(float(w) if inexact else w)
    prefactor = Fraction(comb(t, n), comb(n + ell, n))
    if inexact:
        prefactor = float(prefactor)
    return (c / 2) ** n * prefactor * _horner(coeffs, c2)


def bessel_recurrence_table(n_max: int, t_max: int, c) -> list[list]:
    """Table ``T[n][t] = I_n^c(t)`` built by forward differences in ``t``.

    Seeds ``I_0(0) = 1`` and ``I_n(0) = 0``; steps with
    ``I_0(t+1) = I_0(t) + c I_1(t)``, the special value ``I_1(1) = c/2`` and
    ``I_x(t+1) = I_x(t) + c/2 (I_{x-1}(t) + I_{x+1}(t))`` for ``x >= 1``.
    This never touches the closed forms and serves as their oracle.
    """
    _check_orders(n_max, t_max)
    c = _normalize(c)
    zero = c * 0
    one = zero + 1
    half = c / 2
    size = max(n_max, t_max) + 2  # I_x(t) = 0 for x > t keeps the edge exact
    col = [one] + [zero] * (size - 1)
    table = [[col[n]] for n in range(n_max + 1)]
    for t in range(t_max):
        new = [zero] * size
        # the I_0 relation is stated for t >= 1; at t = 0 both sides vanish
        new[0] = col[0] + c * col[1]
        for x in range(1, size - 1):
            if t == 0 and x == 1:
                new[x] = col[x] + half
            else:
                new[x] = col[x] + half * (col[x - 1] + col[x + 1])
        col = new
        for n in range(n_max + 1):
            table[n].append(col[n])
    return table


def generating_fn(n: int, c, z):
    """``sum_t I_n^c(t) z^t`` in closed form, valid for ``|z| < 1/(1+|c|)``.

    ``z`` may be a scalar or a numpy array. The square root is the principal
    branch; the ratio is evaluated as ``cz / ((1-z) + sqrt(...))`` which is
    algebraically equal to the textbook form and avoids cancellation near 0.
    """
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    c = complex(c)
    if c == 0:
        raise ValueError("generating function requires c != 0")
    radius = 1.0 / (1.0 + abs(c))
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr) >= radius):
        raise ValueError(f"|z| must be < 1/(1+|c|) = {radius:.6g}")
    one_minus = 1.0 - z_arr
    root = np.sqrt(one_minus * one_minus - c * c * z_arr * z_arr)
    ratio = c * z_arr / (one_minus + root)
    value = ratio**n / root
    if np.ndim(z) == 0:
        return complex(value)
    return value


def log_abs(x) -> float:
    """``log|x|`` for a Fraction or int of any size."""
    x = Fraction(x)
    if x == 0:
        return -math.inf
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def _log_asymptotic(n: int, c: float, t: int) -> tuple[int, float]:
    if c == 0:
        raise ValueError("asymptotic requires c != 0")
    if t < 1:
        raise ValueError("asymptotic requires t >= 1")
    sign = 1 if (c > 0 or n % 2 == 0) else -1
    a = abs(c)
    return sign, (t + 0.5) * math.log1p(a) - 0.5 * math.log(2 * math.pi * a * t)


def asymptotic_estimate(n: int, c: float, t: int) -> float:
    """Leading large-``t`` behaviour ``sgn(c)^n (1+|c|)^(t+1/2) / sqrt(2 pi |c| t)``."""
    sign, logv = _log_asymptotic(n, float(c), t)
    return sign * math.exp(logv)


def asymptotic_ratio(n: int, c, t: int) -> float:
    """``I_n^c(t) / asymptotic_estimate(n, c, t)`` without overflowing.

    The Bessel value is computed exactly (``c`` is converted to a Fraction),
    and the ratio is formed in log space.
    """
    c_exact = Fraction(c) if not isinstance(c, Fraction) else c
    value = bessel_poly(n, t, c_exact)
    if value == 0:
        return 0.0
    sign, logv = _log_asymptotic(n, float(c_exact), t)
    ratio = math.exp(log_abs(value) - logv)
    return ratio if (value > 0) == (sign > 0) else -ratio


def lattice_point_solution(x: int, t: int, d):
    """Point-source solution ``(1-2d)^t I_|x|^(2d/(1-2d))(t)`` of lattice diffusion on Z."""
    d = _normalize(d)
    if d * 2 == 1:
        raise ValueError("d = 1/2 is excluded")
    base = 1 - 2 * d
    return base**t * bessel_poly(abs(x), t, 2 * d / base)


def lattice_diffusion_table(d, t_max: int) -> list[list]:
    """Iterate ``u(x,t+1) = u + d (u(x+1) - 2u + u(x-1))`` from a point mass at 0.

    Returns ``rows[t][x + t_max]`` for ``-t_max <= x <= t_max``.
    """
    d = _normalize(d)
    width = 2 * t_max + 1
    zero = d * 0
    u = [zero] * (width + 2)
    u[t_max + 1] = zero + 1
    rows = [u[1:-1]]
    for _ in range(t_max):
        u = [zero] + [
            u[i] + d * (u[i + 1] - 2 * u[i] + u[i - 1]) for i in range(1, width + 1)
        ] + [zero]
        rows.append(u[1:-1])
    return rows
