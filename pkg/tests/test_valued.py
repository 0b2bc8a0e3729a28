from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_nevanlinna.valued import INF, NEG_INF, Prime, ValuedScalar, as_prime, log_abs, log_radius, valuation

primes = st.sampled_from([2, 3, 5, 7, 11])
nonzero_q = st.fractions(max_denominator=10_000).filter(lambda x: x != 0)


@pytest.mark.parametrize("x, p, v", [(12, 2, 2), (Fraction(3, 4), 2, -2), (1, 7, 0), (-50, 5, 2)])
def test_valuation_examples(x, p, v):
    assert valuation(x, p) == v


def test_valuation_of_zero_is_infinite():
    assert valuation(0, 5) is INF
    assert log_abs(0, 5) is NEG_INF


@pytest.mark.parametrize("x, p, expected", [(8, 2, -3), (1, 3, 0), (Fraction(1, 9), 3, 2)])
def test_log_abs_examples(x, p, expected):
    assert log_abs(x, p) == expected


@pytest.mark.parametrize("bad", [0, 1, 4, 15, -3])
def test_prime_rejects_non_primes(bad):
    with pytest.raises(ValueError):
        Prime(bad)


def test_as_prime_accepts_ints_and_primes():
    assert int(as_prime(5)) == 5
    assert as_prime(Prime(3)) == Prime(3)


def test_infinity_orders_above_everything():
    assert INF > 10 ** 9 and not INF < 3
    assert NEG_INF < -10 ** 9
    assert -INF is NEG_INF


@given(nonzero_q, nonzero_q, primes)
def test_valuation_is_multiplicative(x, y, p):
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


@given(nonzero_q, nonzero_q, primes)
def test_ultrametric_inequality(x, y, p):
    vx, vy, vs = valuation(x, p), valuation(y, p), valuation(x + y, p)
    assert vs >= min(vx, vy)
    if vx != vy:
        assert vs == min(vx, vy)


@given(nonzero_q, nonzero_q, primes)
def test_log_abs_is_a_homomorphism(x, y, p):
    assert log_abs(x / y, p) == log_abs(x, p) - log_abs(y, p)


def test_valued_scalar_arithmetic_and_cached_valuation():
    a, b = ValuedScalar(4, 2), ValuedScalar(Fraction(1, 2), 2)
    assert (a * b).valuation == 1
    assert (a / b).value == 8
    assert (a + b).log_abs == 1
    assert (-a).valuation == 2 and (a - a).valuation is INF
    with pytest.raises(ValueError):
        a + ValuedScalar(1, 3)


def test_log_radius_rejects_negative():
    assert log_radius(Fraction(1, 2)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        log_radius(-1)
