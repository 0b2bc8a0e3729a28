"""Reduced rational functions over the rationals.

A :class:`RationalFunction` is the concrete stand-in for a meromorphic
function: a quotient of coprime polynomials with a monic denominator, so that
equal functions compare equal structurally.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .poly import Polynomial, poly_gcd
from .valued import INF


class RationalFunction:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = _as_poly(num)
        den = Polynomial.constant(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial.constant(1)
        elif not reduced and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lc
        if lead != 1:
            num = num * (1 / lead)
            den = den.monic()
        self.num: Polynomial = num
        self.den: Polynomial = den
        self._hash = None

    @classmethod
    def z(cls) -> RationalFunction:
        return cls(Polynomial.z())

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(Polynomial.constant(c))

    # -- queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    @property
    def degree(self) -> int:
        """Degree as a map of the projective line: ``max(deg num, deg den)``."""
        return max(self.num.degree, self.den.degree, 0)

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if other.is_polynomial():
            return RationalFunction(self.num + other.num * self.den, self.den, reduced=True)
        if self.is_polynomial():
            return RationalFunction(other.num + self.num * other.den, other.den, reduced=True)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_polynomial() and other.is_polynomial():
            return RationalFunction(self.num * other.num, reduced=True)
        # cross-cancel first to keep the products small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if g1.degree > 0 else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (other.num, self.den)
        return RationalFunction(n1 * n2, d1 * d2, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, reduced=True)

    def derivative(self) -> RationalFunction:
        if self.is_polynomial():
            return RationalFunction(self.num.derivative(), reduced=True)
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def nth_derivative(self, k: int) -> RationalFunction:
        out = self
        for _ in range(k):
            out = out.derivative()
        return out

    def compose(self, inner: RationalFunction) -> RationalFunction:
        """``self(inner(z))``."""
        d = max(self.num.degree, self.den.degree, 0)
        u, w = inner.num, inner.den

        def homog(P: Polynomial) -> Polynomial:
            out = Polynomial()
            for j, c in enumerate(P.coeffs):
                if c:
                    out = out + (u ** j) * (w ** (d - j)) * c
            return out

        return RationalFunction(homog(self.num), homog(self.den))


Target = Union[RationalFunction, type(INF)]


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, Polynomial)):
        return RationalFunction(x)
    return NotImplemented


def as_rf(x) -> RationalFunction:
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"not a rational function: {x!r}")
    return out


def as_target(x):
    """Accept ``INF``, a rational function, or anything coercible to one."""
    return INF if x is INF else as_rf(x)


def is_inf(a) -> bool:
    return a is INF


class IdenticalToTargetError(ValueError):
    """Raised when ``f - a`` vanishes identically, so its zero set is undefined."""


def a_points(f: RationalFunction, a) -> Polynomial:
    """Polynomial whose zeros are the ``a``-points of ``f`` (the poles for ``a = INF``)."""
    if a is INF:
        return f.den
    diff = f - as_rf(a)
    if diff.is_zero():
        raise IdenticalToTargetError(f"{f} is identically {a}")
    return diff.num


def target_str(a) -> str:
    return "inf" if a is INF else str(a)
