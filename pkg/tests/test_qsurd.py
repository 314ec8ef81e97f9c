from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heatgraph.qsurd import QSurd

fracs = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
qs = st.sampled_from([2, 3, 5, 6, 7])


def test_sqrt_squares_to_q():
    r = QSurd.sqrt(3)
    assert r * r == 3
    assert (r * r).is_rational


def test_perfect_square_normalizes():
    x = QSurd(1, 2, 4)
    assert x.is_rational and x == 5 and x == Fraction(5)


def test_sqrt_power_negative():
    assert QSurd.sqrt_power(2, -3) * QSurd.sqrt_power(2, 3) == 1
    assert QSurd.sqrt_power(2, -2) == Fraction(1, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QSurd(1, 1, 2) / QSurd(0, 0, 2)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        QSurd.sqrt(2) + QSurd.sqrt(3)


def test_rational_crosses_fields():
    assert QSurd.sqrt(2) + QSurd(1, 0, 3) == QSurd(1, 1, 2)


@given(fracs, fracs, fracs, fracs, qs)
def test_field_axioms(a, b, c, d, q):
    x, y = QSurd(a, b, q), QSurd(c, d, q)
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if y != 0:
        assert (x / y) * y == x
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-9, abs=1e-9)


def test_hash_matches_fraction():
    assert hash(QSurd(Fraction(3, 2), 0, 5)) == hash(Fraction(3, 2))


@given(fracs, fracs, qs, st.integers(-6, 9))
def test_power_matches_repeated_multiplication(a, b, q, k):
    for x in (QSurd(a, b, q), QSurd(0, b, q), QSurd(a, 0, q)):
        if x == 0 and k < 0:
            continue
        expect = QSurd(1, 0, q)
        base = x if k >= 0 else x.inverse()
        for _ in range(abs(k)):
            expect = expect * base
        assert x**k == expect
