"""Exact piecewise-linear functions of the log-radius and inequality certificates.

A :class:`PLFunction` lives on ``[0, domain_end]`` (``domain_end=None`` means
the half-line) and is stored canonically as its value at 0 plus a list of
``(start, slope)`` pieces.  Two equal functions have identical representations,
so ``==`` is semantic equality.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Number = int | Fraction


def _q(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


def _end_min(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class PLFunction:
    value_at_0: Fraction
    pieces: tuple  # ((start, slope), ...), first start is 0
    domain_end: Optional[Fraction] = None
    _values: tuple = field(default=(), repr=False, compare=False)

    def __init__(self, value_at_0: Number, pieces: Iterable[tuple[Number, Number]],
                 domain_end: Optional[Number] = None):
        end = None if domain_end is None else _q(domain_end)
        if end is not None and end <= 0:
            raise ValueError("domain_end must be positive")
        raw = sorted((_q(s), _q(m)) for s, m in pieces)
        if not raw or raw[0][0] != 0:
            raise ValueError("first piece must start at 0")
        canon: list[tuple[Fraction, Fraction]] = []
        for s, m in raw:
            if end is not None and s >= end:
                break
            if canon and canon[-1][0] == s:
                raise ValueError(f"duplicate breakpoint {s}")
            if canon and canon[-1][1] == m:
                continue
            canon.append((s, m))
        values = [_q(value_at_0)]
        for (s0, m0), (s1, _) in zip(canon, canon[1:]):
            values.append(values[-1] + m0 * (s1 - s0))
        object.__setattr__(self, "value_at_0", _q(value_at_0))
        object.__setattr__(self, "pieces", tuple(canon))
        object.__setattr__(self, "domain_end", end)
        object.__setattr__(self, "_values", tuple(values))

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, c: Number, domain_end: Optional[Number] = None) -> PLFunction:
        return cls(c, [(0, 0)], domain_end)

    @classmethod
    def linear(cls, slope: Number, intercept: Number = 0,
               domain_end: Optional[Number] = None) -> PLFunction:
        return cls(intercept, [(0, slope)], domain_end)

    @classmethod
    def zero(cls, domain_end: Optional[Number] = None) -> PLFunction:
        return cls.constant(0, domain_end)

    @classmethod
    def from_points(cls, points: Sequence[tuple[Fraction, Fraction]], final_slope: Number,
                    domain_end: Optional[Number] = None) -> PLFunction:
        """Interpolate ``(s, value)`` samples; ``final_slope`` continues past the last."""
        pieces = []
        for (s0, v0), (s1, v1) in zip(points, points[1:]):
            pieces.append((s0, (v1 - v0) / (s1 - s0)))
        pieces.append((points[-1][0], final_slope))
        return cls(points[0][1], pieces, domain_end)

    # -- queries ----------------------------------------------------------
    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(s for s, _ in self.pieces)

    @property
    def final_slope(self) -> Fraction:
        return self.pieces[-1][1]

    def in_domain(self, s: Number) -> bool:
        return s >= 0 and (self.domain_end is None or s <= self.domain_end)

    def _index(self, s: Fraction) -> int:
        return bisect.bisect_right(self.pieces, s, key=_start) - 1

    def slope_at(self, s: Number) -> Fraction:
        """Right-hand slope at ``s``."""
        return self.pieces[self._index(_q(s))][1]

    def __call__(self, s: Number) -> Fraction:
        s = _q(s)
        if not self.in_domain(s):
            raise ValueError(f"s={s} outside domain [0, {self.domain_end}]")
        i = self._index(s)
        start, slope = self.pieces[i]
        return self._values[i] + slope * (s - start)

    def knots(self) -> list[Fraction]:
        """Breakpoints plus the right end of a bounded domain."""
        ks = list(self.breakpoints)
        if self.domain_end is not None:
            ks.append(self.domain_end)
        return ks

    def min_value(self) -> tuple[Optional[Fraction], Optional[Fraction]]:
        """``(minimum, argmin)``; ``(None, None)`` if unbounded below."""
        if self.domain_end is None and self.final_slope < 0:
            return None, None
        best = None
        for s in self.knots():
            v = self(s)
            if best is None or v < best[0]:
                best = (v, s)
        return best

    def max_value(self) -> tuple[Optional[Fraction], Optional[Fraction]]:
        v, s = (-self).min_value()
        return (None, None) if v is None else (-v, s)

    def is_zero(self) -> bool:
        return self.pieces == ((0, 0),) and self.value_at_0 == 0

    def restrict(self, domain_end: Optional[Number]) -> PLFunction:
        end = _end_min(self.domain_end, None if domain_end is None else _q(domain_end))
        return PLFunction(self.value_at_0, self.pieces, end)

    # -- equality / arithmetic sugar -----------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return (self.value_at_0, self.pieces, self.domain_end) == \
            (other.value_at_0, other.pieces, other.domain_end)

    def __hash__(self):
        return hash((self.value_at_0, self.pieces, self.domain_end))

    def __repr__(self):
        body = ", ".join(f"({s}, {m})" for s, m in self.pieces)
        return f"PLFunction(value_at_0={self.value_at_0}, pieces=[{body}], domain_end={self.domain_end})"

    def __add__(self, other):
        return pl_add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return pl_sub(self, _coerce(other, self))

    def __rsub__(self, other):
        return pl_sub(_coerce(other, self), self)

    def __neg__(self):
        return pl_scale(-1, self)

    def __mul__(self, c):
        if isinstance(c, PLFunction):
            return NotImplemented
        return pl_scale(c, self)

    __rmul__ = __mul__


def _start(piece):
    return piece[0]


def _coerce(x, like: PLFunction) -> PLFunction:
    if isinstance(x, PLFunction):
        return x
    return PLFunction.constant(x, like.domain_end)


def _common_knots(fs: Sequence[PLFunction]) -> tuple[list[Fraction], Optional[Fraction]]:
    end = None
    for f in fs:
        end = _end_min(end, f.domain_end)
    ks = set()
    for f in fs:
        ks.update(s for s in f.breakpoints if end is None or s < end)
    return sorted(ks), end


def pl_sum(fs: Iterable[PLFunction], domain_end: Optional[Number] = None) -> PLFunction:
    """Pointwise sum of any number of functions (zero for an empty input)."""
    fs = list(fs)
    if not fs:
        return PLFunction.zero(domain_end)
    knots, end = _common_knots(fs)
    end = _end_min(end, None if domain_end is None else _q(domain_end))
    if end is not None:
        knots = [k for k in knots if k < end]
    points = [(k, sum((f(k) for f in fs), Fraction(0))) for k in knots]
    last = knots[-1]
    return PLFunction.from_points(points, sum((f.slope_at(last) for f in fs), Fraction(0)), end)


def pl_add(f: PLFunction, g: PLFunction) -> PLFunction:
    return pl_sum([f, g])


def pl_scale(c: Number, f: PLFunction) -> PLFunction:
    c = _q(c)
    return PLFunction(c * f.value_at_0, [(s, c * m) for s, m in f.pieces], f.domain_end)


def pl_sub(f: PLFunction, g: PLFunction) -> PLFunction:
    return pl_sum([f, pl_scale(-1, g)])


def _lattice(f: PLFunction, g: PLFunction, take_max: bool) -> PLFunction:
    knots, end = _common_knots([f, g])
    crossings = []
    bounds = knots[1:] + [end]
    for a, b in zip(knots, bounds):
        d0 = f(a) - g(a)
        ds = f.slope_at(a) - g.slope_at(a)
        if ds == 0 or d0 == 0:
            continue
        t = a - d0 / ds
        if t > a and (b is None or t < b):
            crossings.append(t)
    knots = sorted(set(knots) | set(crossings))
    pick = max if take_max else min
    points = [(k, pick(f(k), g(k))) for k in knots]
    last = knots[-1]
    fv, gv = f(last), g(last)
    fm, gm = f.slope_at(last), g.slope_at(last)
    if fv == gv:
        slope = pick(fm, gm)
    else:
        slope = fm if (fv > gv) == take_max else gm
    return PLFunction.from_points(points, slope, end)


def pl_max(f: PLFunction, g: PLFunction) -> PLFunction:
    return _lattice(f, g, True)


def pl_min(f: PLFunction, g: PLFunction) -> PLFunction:
    return _lattice(f, g, False)


def pl_max_all(fs: Iterable[PLFunction]) -> PLFunction:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = pl_max(out, f)
    return out


def pl_min_all(fs: Iterable[PLFunction]) -> PLFunction:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = pl_min(out, f)
    return out


def pl_pos(f: PLFunction) -> PLFunction:
    """Positive part ``max(f, 0)``; this is ``log+`` on log-norms."""
    return pl_max(f, PLFunction.zero(f.domain_end))


def pl_eval(f: PLFunction, s: Number) -> Fraction:
    return f(s)


def pl_hinge(corner: Number, weight: Number = 1, domain_end: Optional[Number] = None) -> PLFunction:
    """``weight * max(0, s - corner)``; a corner at or below 0 gives an affine function."""
    corner = _q(corner)
    weight = _q(weight)
    if corner <= 0:
        return PLFunction(-weight * corner, [(0, weight)], domain_end)
    return PLFunction(0, [(0, 0), (corner, weight)], domain_end)


# -- certificates ------------------------------------------------------------

class VerdictKind(Enum):
    HOLDS_EXACTLY = "HoldsExactly"
    HOLDS_UP_TO_CONSTANT = "HoldsUpToConstant"
    HOLDS_WITHIN_SMALL_BUDGET = "HoldsWithinSmallBudget"
    VIOLATED = "Violated"


_STRENGTH = {
    VerdictKind.HOLDS_EXACTLY: 3,
    VerdictKind.HOLDS_UP_TO_CONSTANT: 2,
    VerdictKind.HOLDS_WITHIN_SMALL_BUDGET: 1,
    VerdictKind.VIOLATED: 0,
}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    constant: Optional[Fraction] = None
    ratio: Optional[Fraction] = None
    witness: Optional[Fraction] = None

    @property
    def holds(self) -> bool:
        return self.kind is not VerdictKind.VIOLATED

    @property
    def strength(self) -> int:
        return _STRENGTH[self.kind]

    def at_least(self, kind: VerdictKind) -> bool:
        """True if this verdict is ``kind`` or a stronger one."""
        return self.strength >= _STRENGTH[kind]

    def __str__(self):
        k = self.kind.value
        if self.kind is VerdictKind.HOLDS_UP_TO_CONSTANT:
            return f"{k}({self.constant})"
        if self.kind is VerdictKind.HOLDS_WITHIN_SMALL_BUDGET:
            return f"{k}({self.ratio})"
        if self.kind is VerdictKind.VIOLATED:
            return f"{k}(s={self.witness})"
        return k


@dataclass(frozen=True)
class InequalityCertificate:
    """Exact record of ``lhs <= rhs`` checked on a common domain.

    ``budget_ratio`` is the least ``rho >= 0`` with ``slack + rho*small_budget >= 0``
    everywhere, or ``None`` when no such ``rho`` exists.
    """

    label: str
    lhs: PLFunction
    rhs: PLFunction
    slack: PLFunction
    small_budget: PLFunction
    min_slack: Optional[Fraction]
    final_slope_gap: Fraction
    budget_ratio: Optional[Fraction]
    verdict: Verdict
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict.holds


def minimal_budget_ratio(slack: PLFunction, budget: PLFunction) -> Optional[Fraction]:
    knots, end = _common_knots([slack, budget])
    pts = list(knots)
    if end is not None:
        pts.append(end)
    lower, upper = Fraction(0), None
    constraints = [(slack(s), budget(s)) for s in pts]
    if end is None:
        last = knots[-1]
        constraints.append((slack.slope_at(last), budget.slope_at(last)))
    for sig, beta in constraints:
        if beta > 0:
            lower = max(lower, -sig / beta)
        elif beta < 0:
            bound = -sig / beta
            upper = bound if upper is None else min(upper, bound)
        elif sig < 0:
            return None
    if upper is not None and lower > upper:
        return None
    return lower


def _violation_witness(slack: PLFunction, budget: PLFunction) -> Optional[Fraction]:
    total = pl_add(slack, budget)
    for s in total.knots():
        if total(s) < 0:
            return s
    if total.domain_end is None and total.final_slope < 0:
        last = total.breakpoints[-1]
        return last + max(Fraction(0), total(last)) / -total.final_slope + 1
    return None


def pl_compare(lhs: PLFunction, rhs: PLFunction, small_budget: Optional[PLFunction] = None,
               label: str = "", details: Optional[dict] = None) -> InequalityCertificate:
    """Certify ``lhs <= rhs`` (+ small-function budget) on the common domain."""
    if small_budget is None:
        small_budget = PLFunction.zero(_end_min(lhs.domain_end, rhs.domain_end))
    end = _end_min(_end_min(lhs.domain_end, rhs.domain_end), small_budget.domain_end)
    lhs, rhs, small_budget = lhs.restrict(end), rhs.restrict(end), small_budget.restrict(end)
    slack = pl_sub(rhs, lhs)
    min_slack, _ = slack.min_value()
    gap = slack.final_slope
    rho = minimal_budget_ratio(slack, small_budget)
    if min_slack is not None and min_slack >= 0:
        verdict = Verdict(VerdictKind.HOLDS_EXACTLY)
    elif min_slack is not None and gap >= 0:
        verdict = Verdict(VerdictKind.HOLDS_UP_TO_CONSTANT, constant=-min_slack)
    elif rho is not None and rho <= 1:
        verdict = Verdict(VerdictKind.HOLDS_WITHIN_SMALL_BUDGET, ratio=rho)
    else:
        verdict = Verdict(VerdictKind.VIOLATED, witness=_violation_witness(slack, small_budget))
    return InequalityCertificate(label, lhs, rhs, slack, small_budget, min_slack, gap, rho,
                                 verdict, dict(details or {}))
