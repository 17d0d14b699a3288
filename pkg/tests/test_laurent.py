from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from heapkit.laurent import LaurentPoly, q, qbinomial, qfactorial, qint

polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(LaurentPoly)


def test_zero_coefficients_trimmed():
    assert LaurentPoly({3: 0, 1: 2}).coeffs == {1: 2}
    assert LaurentPoly() == 0
    assert not LaurentPoly({2: 0})


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(polys, polys)
def test_exact_division_recovers_factor(a, b):
    if not b:
        return
    assert (a * b) / b == a


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        (q + 1) / (q * q + 1)


def test_inverse_monomial():
    assert q ** -2 * q ** 2 == 1
    with pytest.raises(ZeroDivisionError):
        (q + 1) ** -1


@pytest.mark.parametrize("m,expected", [(-1, -1), (0, 0), (1, 1)])
def test_small_quantum_integers(m, expected):
    for d in (1, 2):
        assert qint(m, d) == expected


def test_quantum_integers():
    assert qint(2) == q + q ** -1
    assert qint(3, 2) == q ** 4 + 1 + q ** -4
    assert qint(3) * (q - q ** -1) == q ** 3 - q ** -3


@pytest.mark.parametrize("n", range(6))
def test_classical_limit(n):
    assert qint(n).evaluate(1) == n
    assert qfactorial(n).evaluate(1) == factorial(n)
    for r in range(n + 1):
        assert qbinomial(n, r).evaluate(1) == comb(n, r)


def test_repr():
    assert repr(q ** 2 - 3 + q ** -1) == "q^2 - 3 + q^-1"
