"""Exact arithmetic in the quadratic field Q(sqrt(q)).

Values like ``q**(-k/2)`` and ``-2/sqrt(q)`` show up throughout the counting
system, so they are carried as ``a + b*sqrt(q)`` with rational ``a`` and ``b``.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational

__all__ = ["QSurd", "as_fraction"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QSurd:
    """An element ``a + b*sqrt(q)`` with ``a, b`` rational and ``q >= 1``.

    When ``q`` is a perfect square the surd part is folded into ``a`` so that
    rational values always have ``b == 0`` and compare equal to Fractions.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q: int = 1):
        if not isinstance(q, int) or q < 1:
            raise ValueError(f"q must be a positive integer, got {q!r}")
        a = as_fraction(a)
        b = as_fraction(b)
        r = isqrt(q)
        if r * r == q:
            a, b = a + b * r, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QSurd is immutable")

    @classmethod
    def sqrt(cls, q: int) -> "QSurd":
        return cls(0, 1, q)

    @classmethod
    def sqrt_power(cls, q: int, k: int) -> "QSurd":
        """Exact ``q**(k/2)`` for any integer ``k``."""
        half, odd = divmod(abs(k), 2)
        base = Fraction(q) ** half
        value = cls(0, base, q) if odd else cls(base, 0, q)
        return value if k >= 0 else value.inverse()

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "QSurd":
        if isinstance(other, QSurd):
            if other.q != self.q and not (other.b == 0 or self.b == 0):
                raise ValueError(f"cannot mix Q(sqrt({self.q})) and Q(sqrt({other.q}))")
            if other.q != self.q:
                # one side is rational; re-home it in this field
                if other.b == 0:
                    return QSurd(other.a, 0, self.q)
                return other  # self is rational, caller swaps fields
            return other
        if isinstance(other, (int, Rational)):
            return QSurd(other, 0, self.q)
        return NotImplemented

    def _field(self, other: "QSurd") -> int:
        if self.q == other.q:
            return self.q
        return other.q if self.b == 0 else self.q

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> "QSurd":
        return QSurd(self.a, -self.b, self.q)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.q

    def inverse(self) -> "QSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QSurd division by zero")
        return QSurd(self.a / n, -self.b / n, self.q)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSurd(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QSurd(-self.a, -self.b, self.q)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSurd(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSurd(self.a * other, self.b * other, self.q)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        q = self._field(o)
        return QSurd(self.a * o.a + self.b * o.b * q, self.a * o.b + self.b * o.a, q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QSurd division by zero")
            return QSurd(self.a / other, self.b / other, self.q)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.b == 0:
            return QSurd(self.a**k, 0, self.q)
        if self.a == 0:
            # (b sqrt q)^k = b^k q^(k//2) sqrt(q)^(k%2)
            mag = self.b**k * Fraction(self.q) ** (k // 2)
            return QSurd(0, mag, self.q) if k % 2 else QSurd(mag, 0, self.q)
        result = QSurd(1, 0, self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QSurd):
            return self.a == other.a and self.b == other.b and (self.q == other.q or self.b == 0)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.q))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * self.q ** 0.5

    def __complex__(self):
        return complex(float(self))

    def __repr__(self):
        return f"QSurd({self.a}, {self.b}, q={self.q})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.q})"
