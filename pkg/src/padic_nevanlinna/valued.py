"""Rationals with the p-adic valuation.

Every logarithmic quantity in this package is measured in base-p units, so
``log_p |x| = -v_p(x)`` is an exact rational and the log-radius ``s = log_p r``
is the independent variable of every piecewise-linear function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
from typing import Union

Rational = Union[int, Fraction]


class _Infinity:
    """Positive infinity as a valuation; compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("padic_nevanlinna.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __neg__(self):
        return NEG_INF

    def __reduce__(self):
        return (_Infinity, ())


class _NegInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("padic_nevanlinna.NEG_INF")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __neg__(self):
        return INF

    def __reduce__(self):
        return (_NegInfinity, ())


INF = _Infinity()
NEG_INF = _NegInfinity()


@lru_cache(maxsize=256)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class Prime:
    """A rational prime; primality is checked on construction."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def __int__(self):
        return self.p

    def __index__(self):
        return self.p

    def __str__(self):
        return str(self.p)


def as_prime(p: Prime | int) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: Prime | int):
    """Return ``v_p(x)``; ``v_p(0)`` is :data:`INF`.

    >>> valuation(12, 2), valuation(Fraction(3, 4), 2)
    (2, -2)
    """
    p = int(as_prime(p))
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_valuation(abs(x.numerator), p) - _int_valuation(x.denominator, p)


def log_abs(x: Rational, p: Prime | int):
    """``log_p |x|_p`` as an exact integer, :data:`NEG_INF` for zero."""
    v = valuation(x, p)
    return NEG_INF if v is INF else -v


@dataclass(frozen=True)
class ValuedScalar:
    """An exact rational paired with its cached p-adic valuation."""

    value: Fraction
    prime: Prime

    def __init__(self, value: Rational, prime: Prime | int):
        object.__setattr__(self, "value", Fraction(value))
        object.__setattr__(self, "prime", as_prime(prime))

    @property
    def valuation(self):
        return valuation(self.value, self.prime)

    @property
    def log_abs(self):
        return log_abs(self.value, self.prime)

    def _check(self, other: ValuedScalar) -> None:
        if other.prime != self.prime:
            raise ValueError("mixed primes")

    def __add__(self, other: ValuedScalar) -> ValuedScalar:
        self._check(other)
        return ValuedScalar(self.value + other.value, self.prime)

    def __sub__(self, other: ValuedScalar) -> ValuedScalar:
        self._check(other)
        return ValuedScalar(self.value - other.value, self.prime)

    def __mul__(self, other: ValuedScalar) -> ValuedScalar:
        self._check(other)
        return ValuedScalar(self.value * other.value, self.prime)

    def __truediv__(self, other: ValuedScalar) -> ValuedScalar:
        self._check(other)
        return ValuedScalar(self.value / other.value, self.prime)

    def __neg__(self) -> ValuedScalar:
        return ValuedScalar(-self.value, self.prime)


def log_radius(s: Rational) -> Fraction:
    """Validate a log-radius ``s = log_p r``; only ``r >= 1`` is modelled."""
    s = Fraction(s)
    if s < 0:
        raise ValueError(f"log-radius must be >= 0, got {s}")
    return s
