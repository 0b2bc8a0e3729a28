"""Seeded random generators shared by the test modules."""

import random
from fractions import Fraction

from padic_nevanlinna.poly import Polynomial
from padic_nevanlinna.rational import RationalFunction
from padic_nevanlinna.valued import INF

PRIMES = (2, 3, 5)


def rand_rational_number(rng: random.Random, bound: int = 12) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.choice([1, 1, 1, 2, 3, 4, 5, 9, 25])
    return Fraction(num, den)


def rand_poly(rng: random.Random, deg: int, bound: int = 12) -> Polynomial:
    coeffs = [rand_rational_number(rng, bound) for _ in range(deg)]
    lead = Fraction(0)
    while lead == 0:
        lead = rand_rational_number(rng, bound)
    return Polynomial(coeffs + [lead])


def rand_rf(rng: random.Random, max_deg: int = 4, bound: int = 12, polynomial: bool = False) -> RationalFunction:
    """A nonconstant reduced rational function of degree at most ``max_deg``."""
    while True:
        num = rand_poly(rng, rng.randint(0, max_deg), bound)
        den = Polynomial.constant(1) if polynomial or rng.random() < 0.3 else \
            rand_poly(rng, rng.randint(1, max_deg), bound)
        f = RationalFunction(num, den)
        if not f.is_constant():
            return f


def rand_constant_target(rng: random.Random):
    if rng.random() < 0.15:
        return INF
    return RationalFunction.constant(rand_rational_number(rng, 30))


def distinct_constants(rng: random.Random, q: int) -> list:
    out, seen = [], set()
    while len(out) < q:
        a = rand_constant_target(rng)
        key = "inf" if a is INF else a.constant_value()
        if key not in seen:
            seen.add(key)
            out.append(a)
    return out
