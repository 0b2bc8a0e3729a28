"""Univariate polynomials over the rationals, Newton polygons and zero profiles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
import math
from typing import Callable, Iterable, Optional, Sequence

from .pl import PLFunction, pl_hinge, pl_sum
from .valued import Prime, as_prime, valuation


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class Polynomial:
    """Dense polynomial ``a_0 + a_1 z + ... + a_d z^d`` with exact rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def z(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> Polynomial:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Polynomial:
        out = cls.constant(lead)
        for r in roots:
            out = out * cls((-_frac(r), 1))
        return out

    # -- basic queries --------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def ord0(self) -> int:
        """Order of vanishing at ``z = 0``."""
        if not self.coeffs:
            raise ValueError("zero polynomial")
        for j, c in enumerate(self.coeffs):
            if c:
                return j
        raise AssertionError

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if not c:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if mono and c == 1:
                body = mono
            elif mono and c == -1:
                body = "-" + mono
            else:
                lit = str(c) if c.denominator == 1 else f"({c})"
                body = lit + ("*" + mono if mono else "")
            terms.append(body)
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

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
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        if len(b) == 1:
            c = b[0]
            return Polynomial([x * c for x in a])
        if len(a) == 1:
            c = a[0]
            return Polynomial([x * c for x in b])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero")
        c = Fraction(c)
        return Polynomial([x / c for x in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.lc
        if len(rem) - 1 < db:
            return Polynomial(), Polynomial(rem)
        quot = [Fraction(0)] * (len(rem) - db)
        bcs = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lead
            quot[k] = c
            if c:
                for j in range(db + 1):
                    rem[k + j] -= c * bcs[j]
        return Polynomial(quot), Polynomial(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Polynomial:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def derivative(self) -> Polynomial:
        return Polynomial([j * c for j, c in enumerate(self.coeffs)][1:])

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        lead = self.lc
        if lead == 1:
            return self
        return Polynomial([c / lead for c in self.coeffs])

    def compose(self, inner: Polynomial) -> Polynomial:
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def integer_primitive(self) -> tuple[Fraction, list[int]]:
        """Return ``(c, P)`` with ``self = c * P``, ``P`` integral, primitive, positive lead."""
        if not self.coeffs:
            return Fraction(0), []
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [x // g for x in ints]


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    return NotImplemented


# -- gcd and squarefree decomposition ---------------------------------------------

def _int_primitive(a: list[int]) -> list[int]:
    g = reduce(math.gcd, a, 0)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return [x // g for x in a]


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[shift + j] -= lr * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def prs_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the primitive remainder sequence; slow but simple."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Polynomial.constant(1)
    x = a.integer_primitive()[1]
    y = b.integer_primitive()[1]
    if len(x) < len(y):
        x, y = y, x
    while y:
        if len(y) == 1:
            return Polynomial.constant(1)
        x, y = y, _int_primitive(_int_prem(x, y))
    return Polynomial(x).monic()


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_MOD_PRIMES: list[int] = []


def _mod_prime(i: int) -> int:
    while len(_MOD_PRIMES) <= i:
        n = (_MOD_PRIMES[-1] if _MOD_PRIMES else 2 ** 62) - 1
        while not _is_probable_prime(n):
            n -= 1
        _MOD_PRIMES.append(n)
    return _MOD_PRIMES[i]


def _gcd_mod(a: list[int], b: list[int], q: int) -> list[int]:
    x = [c % q for c in a]
    y = [c % q for c in b]
    for v in (x, y):
        while v and v[-1] == 0:
            v.pop()
    while y:
        inv = pow(y[-1], -1, q)
        dy = len(y) - 1
        while len(x) - 1 >= dy and x:
            c = x[-1] * inv % q
            shift = len(x) - 1 - dy
            for j in range(dy + 1):
                x[shift + j] = (x[shift + j] - c * y[j]) % q
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    inv = pow(x[-1], -1, q)
    return [c * inv % q for c in x]


def _divides(d: list[int], a: list[int]) -> bool:
    return (Polynomial(a) % Polynomial(d)).is_zero()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the rationals (zero if both inputs are zero).

    Multi-modular: images modulo large primes are combined by CRT until the
    lifted candidate divides both inputs.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Polynomial.constant(1)
    x = a.integer_primitive()[1]
    y = b.integer_primitive()[1]
    lead = math.gcd(x[-1], y[-1])
    acc: Optional[list[int]] = None
    modulus = 1
    deg = None
    previous = None
    i = 0
    while True:
        q = _mod_prime(i)
        i += 1
        if x[-1] % q == 0 or y[-1] % q == 0:
            continue
        g = _gcd_mod(x, y, q)
        d = len(g) - 1
        if d == 0:
            return Polynomial.constant(1)
        g = [c * lead % q for c in g]
        if deg is None or d < deg:
            acc, modulus, deg, previous = g, q, d, None
        elif d > deg:
            continue
        else:
            inv = pow(modulus, -1, q)
            acc = [u + modulus * ((v - u) * inv % q) for u, v in zip(acc, g)]
            modulus *= q
        half = modulus // 2
        cand = _int_primitive([c - modulus if c > half else c for c in acc])
        if cand == previous and _divides(cand, x) and _divides(cand, y):
            return Polynomial(cand).monic()
        previous = cand


def squarefree_decompose(F: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun decomposition ``F = lc(F) * prod F_i^i`` with monic, squarefree, coprime ``F_i``.

    Only factors of positive degree are listed, ordered by multiplicity.
    """
    if F.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    F = F.monic()
    if F.degree <= 0:
        return []
    dF = F.derivative()
    a = poly_gcd(F, dF)
    b = F.exact_div(a)
    c = dF.exact_div(a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(F: Polynomial) -> Polynomial:
    """Monic radical of ``F``."""
    out = Polynomial.constant(1)
    for Fi, _ in squarefree_decompose(F):
        out = out * Fi
    return out


# -- Newton polygons --------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(j, v_p(a_j))`` over the nonzero coefficients."""

    vertices: tuple[tuple[int, Fraction], ...]

    def sides(self) -> list[tuple[Fraction, int]]:
        """``(slope, horizontal length)`` of each side, slopes strictly increasing."""
        out = []
        for (j0, v0), (j1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0, j1 - j0), j1 - j0))
        return out

    @property
    def slopes(self) -> list[Fraction]:
        return [s for s, _ in self.sides()]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(h: Polynomial, p: Prime | int) -> NewtonPolygon:
    if h.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    return _newton_polygon(h, int(as_prime(p)))


@lru_cache(maxsize=4096)
def _newton_polygon(h: Polynomial, p: int) -> NewtonPolygon:
    pts = [(j, Fraction(valuation(c, p))) for j, c in enumerate(h.coeffs) if c]
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


@dataclass(frozen=True)
class MultiplicityProfile:
    """Zeros grouped as ``(valuation, multiplicity, count of distinct zeros)``.

    Zeros at the origin are kept apart in ``ord_0``.
    """

    entries: tuple[tuple[Fraction, int, int], ...]
    ord_0: int = 0

    @property
    def degree(self) -> int:
        return sum(m * n for _, m, n in self.entries) + self.ord_0

    def distinct(self) -> int:
        return sum(n for _, _, n in self.entries) + (1 if self.ord_0 else 0)

    def filtered(self, min_mult: int = 1, max_mult: Optional[int] = None) -> MultiplicityProfile:
        def keep(m):
            return m >= min_mult and (max_mult is None or m <= max_mult)
        return MultiplicityProfile(tuple(e for e in self.entries if keep(e[1])),
                                   self.ord_0 if self.ord_0 and keep(self.ord_0) else 0)


def _merge(entries) -> tuple[tuple[Fraction, int, int], ...]:
    acc: dict[tuple[Fraction, int], int] = {}
    for val, m, n in entries:
        acc[(val, m)] = acc.get((val, m), 0) + n
    return tuple(sorted((v, m, n) for (v, m), n in acc.items()))


def _strip_origin(h: Polynomial) -> tuple[Polynomial, int]:
    k = h.ord0()
    return (Polynomial(h.coeffs[k:]) if k else h), k


def polygon_profile(h: Polynomial, p: Prime | int) -> MultiplicityProfile:
    """Zero valuations with multiplicity folded into the count (``m = 1`` entries)."""
    if h.is_zero():
        raise ValueError("zero polynomial has no zero profile")
    core, k = _strip_origin(h)
    entries = [(-slope, 1, length) for slope, length in newton_polygon(core, p).sides()]
    return MultiplicityProfile(_merge(entries), k)


def zeros_profile(h: Polynomial, p: Prime | int) -> MultiplicityProfile:
    """Distinct zeros of ``h`` by valuation and multiplicity.

    A polygon side of slope ``sigma`` and length ``l`` carries ``l`` zeros of
    valuation ``-sigma``; multiplicities come from the squarefree decomposition.
    """
    if h.is_zero():
        raise ValueError("zero polynomial has no zero profile")
    return _zeros_profile(h, int(as_prime(p)))


@lru_cache(maxsize=4096)
def _zeros_profile(h: Polynomial, p: int) -> MultiplicityProfile:
    entries = []
    ord_0 = 0
    for Fi, i in squarefree_decompose(h):
        core, k = _strip_origin(Fi)
        if k:
            ord_0 = i
        for slope, length in newton_polygon(core, p).sides():
            entries.append((-slope, i, length))
    return MultiplicityProfile(_merge(entries), ord_0)


# -- log-norms and counting -------------------------------------------------------

def norm_log(h: Polynomial, p: Prime | int, domain_end=None) -> PLFunction:
    """``log_p |h|_r = max_j (j*s - v(a_j))`` as a convex function of ``s >= 0``."""
    if h.is_zero():
        raise ValueError("log-norm of the zero polynomial is -infinity")
    verts = newton_polygon(h, p).vertices
    slopes = [Fraction(v1 - v0, j1 - j0) for (j0, v0), (j1, v1) in zip(verts, verts[1:])]
    # the vertex active just right of s = 0 is the first whose outgoing slope is > 0
    k = 0
    while k < len(slopes) and slopes[k] <= 0:
        k += 1
    pieces = [(Fraction(0), verts[k][0])]
    for m in range(k, len(slopes)):
        pieces.append((slopes[m], verts[m + 1][0]))
    return PLFunction(-verts[k][1], pieces, domain_end)


def profile_counting(profile: MultiplicityProfile, weighted: bool = True,
                     domain_end=None) -> PLFunction:
    """Valence function of a zero profile.

    Each zero of valuation ``v`` contributes ``max(0, s + v)`` times its
    multiplicity (``weighted``) or once; the origin contributes ``s`` per zero.
    """
    terms = []
    for val, m, n in profile.entries:
        terms.append(pl_hinge(-val, (m if weighted else 1) * n, domain_end))
    if profile.ord_0:
        terms.append(PLFunction.linear(profile.ord_0 if weighted else 1, 0, domain_end))
    return pl_sum(terms, domain_end)


def window_product(M: int, p: Prime | int,
                   factor: Optional[Callable[[int, int], Polynomial]] = None) -> Polynomial:
    """Expand ``prod_{k=1..M} factor(k, p)``, by default ``1 - p^k z``.

    The default product agrees in norm and zeros with the infinite product for
    ``s <= M``: every omitted factor has ``|1 - p^k z|_r = 1`` there.
    """
    if M < 1:
        raise ValueError("window product needs M >= 1")
    p = int(as_prime(p))
    if factor is None:
        def factor(k, q):
            return Polynomial((1, -(q ** k)))
    out = Polynomial.constant(1)
    for k in range(1, M + 1):
        out = out * factor(k, p)
    return out


def rational_roots(h: Polynomial) -> list[Fraction]:
    """All rational roots of ``h`` (without multiplicity).

    Roots modulo a small prime are Hensel-lifted and rationally
    reconstructed; any root ``u/v`` has ``u | a_0`` and ``v | a_d``, which
    bounds the modulus needed.
    """
    if h.is_zero():
        raise ValueError("zero polynomial")
    core, k = _strip_origin(h)
    roots = {Fraction(0)} if k else set()
    core = squarefree_part(core) if core.degree > 1 else core.monic()
    if core.degree <= 0:
        return sorted(roots)
    _, ints = core.integer_primitive()
    U, V = abs(ints[0]), abs(ints[-1])
    q = _root_prime(ints)
    M = q
    while M <= 2 * U * V:
        M *= M
    for r0 in range(q):
        if _eval_mod(ints, r0, q) != 0:
            continue
        r = _hensel_lift(ints, r0, q, M)
        cand = _reconstruct(r, M, U, V)
        if cand is not None and core(cand) == 0:
            roots.add(cand)
    return sorted(roots)


def _eval_mod(a: list[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % q
    return acc


def _root_prime(a: list[int]) -> int:
    """Smallest odd prime keeping the leading coefficient and the squarefreeness of ``a``."""
    da = [i * c for i, c in enumerate(a)][1:]
    q = 3
    while True:
        if _is_probable_prime(q) and a[-1] % q and len(_gcd_mod(a, da, q)) == 1:
            return q
        q += 2


def _hensel_lift(a: list[int], r: int, q: int, M: int) -> int:
    da = [i * c for i, c in enumerate(a)][1:]
    m = q
    while m < M:
        m = min(m * m, M)
        r = (r - _eval_mod(a, r, m) * pow(_eval_mod(da, r, m), -1, m)) % m
    return r


def _reconstruct(r: int, M: int, U: int, V: int) -> Optional[Fraction]:
    """``u/v`` with ``u = v r (mod M)``, ``|u| <= U``, ``0 < v <= V``, if one exists."""
    r0, r1 = M, r % M
    t0, t1 = 0, 1
    while r1 > U:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        t0, t1 = t1, t0 - quo * t1
    if t1 == 0 or abs(t1) > V or math.gcd(r1, t1) != 1:
        return None
    return Fraction(r1, t1)


def resultant(a: Polynomial, b: Polynomial) -> Fraction:
    """Resultant of two nonzero polynomials, by the Euclidean remainder sequence."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    sign, out = 1, Fraction(1)
    while b.degree > 0:
        m, n = a.degree, b.degree
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if m * n % 2:
            sign = -sign
        out *= b.lc ** (m - r.degree)
        a, b = b, r
    return sign * out * b.lc ** a.degree


def interpolate(points: Sequence[tuple]) -> Polynomial:
    """The polynomial of least degree through ``(x, y)`` points with distinct ``x``."""
    out = Polynomial()
    for i, (xi, yi) in enumerate(points):
        basis = Polynomial.constant(yi)
        for j, (xj, _) in enumerate(points):
            if j != i:
                basis = basis * Polynomial((-_frac(xj), 1)) * Fraction(1, _frac(xi) - _frac(xj))
        out = out + basis
    return out


def reassemble(lead: Fraction, factors: Sequence[tuple[Polynomial, int]]) -> Polynomial:
    out = Polynomial.constant(lead)
    for Fi, i in factors:
        out = out * Fi ** i
    return out
