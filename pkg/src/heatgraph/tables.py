"""Kernel tables and exact-value serialization."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["KernelTable", "fraction_str", "parse_fraction"]


def fraction_str(x) -> str:
    """Serialize an exact rational as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class KernelTable:
    """Exact kernel values ``values[x][t]`` for ``0 <= t <= t_max``.

    ``x`` is a vertex index for graph kernels or a radius for tree kernels.
    """

    basepoint: int
    t_max: int
    values: tuple[tuple, ...]

    def __post_init__(self):
        for row in self.values:
            if len(row) != self.t_max + 1:
                raise ValueError("every row must cover t = 0..t_max")

    def __getitem__(self, key):
        x, t = key
        return self.values[x][t]

    @property
    def size(self) -> int:
        return len(self.values)

    def column(self, t: int) -> tuple:
        return tuple(row[t] for row in self.values)

    def column_sum(self, t: int, weights=None):
        if weights is None:
            return sum(row[t] for row in self.values)
        return sum(w * row[t] for w, row in zip(weights, self.values))

    def to_csv(self, index_name: str = "vertex") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([index_name, "t", "value"])
        for x, row in enumerate(self.values):
            for t, v in enumerate(row):
                writer.writerow([x, t, fraction_str(v)])
        return buf.getvalue()
