"""Binomial transforms between the heat kernel and the random-walk kernel.

Both kernels start from the same point mass, so a time series of one
determines the other:

    K_rw(t) = (q/(q+1))^t  sum_k C(t,k) q^-k K(k)
    K(t)    = (-q)^t       sum_k (-1)^k C(t,k) (1+1/q)^k K_rw(k)
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

__all__ = ["heat_series_from_rw", "rw_series_from_heat"]


def rw_series_from_heat(heat: Sequence, q: int) -> list[Fraction]:
    """Random-walk values for ``t = 0..len(heat)-1`` from heat-kernel values."""
    out = []
    for t in range(len(heat)):
        s = sum(comb(t, k) * Fraction(heat[k], q**k) for k in range(t + 1))
        out.append(Fraction(q, q + 1) ** t * s)
    return out


def heat_series_from_rw(rw: Sequence, q: int) -> list[Fraction]:
    """Inverse of :func:`rw_series_from_heat`."""
    ratio = Fraction(q + 1, q)
    out = []
    for t in range(len(rw)):
        s = sum((-1) ** k * comb(t, k) * ratio**k * Fraction(rw[k]) for k in range(t + 1))
        out.append((-q) ** t * s)
    return out
