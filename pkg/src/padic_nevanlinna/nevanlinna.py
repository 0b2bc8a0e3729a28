"""Counting, proximity and characteristic functions as exact PL functions.

Valence functions follow the integral definition counted from the origin, so a
zero ``z0 != 0`` contributes ``max(0, s + v(z0))`` (per unit of multiplicity)
and a zero at the origin of order ``n`` contributes ``n*s``.  With this
convention ``log |h|_r = N(r, 1/h) + log |a_{ord}|`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .pl import (InequalityCertificate, PLFunction, pl_compare, pl_pos, pl_sub, pl_sum)
from .poly import norm_log, polygon_profile, profile_counting, zeros_profile
from .rational import RationalFunction, a_points, as_target, target_str
from .valued import INF, Prime, as_prime


class DegenerateInputError(ValueError):
    """An input violates a precondition in a way the checker reports, not ignores."""


def _poly_log_norm(P, p, domain_end):
    return norm_log(P, p, domain_end)


def log_norm(f: RationalFunction, p: Prime | int, domain_end=None) -> PLFunction:
    """``log_p |f|_r = log_p |num|_r - log_p |den|_r``."""
    if f.is_zero():
        raise ValueError("log-norm of the zero function")
    return pl_sub(_poly_log_norm(f.num, p, domain_end), _poly_log_norm(f.den, p, domain_end))


def valence_N(f: RationalFunction, a=INF, p: Prime | int = 2, domain_end=None) -> PLFunction:
    """``N(r, 1/(f-a))``, counting multiplicity; ``a = INF`` counts poles."""
    P = a_points(f, as_target(a))
    return profile_counting(polygon_profile(P, p), weighted=True, domain_end=domain_end)


def counting_function(f: RationalFunction, a, p: Prime | int, *, reduced: bool,
                      min_mult: int = 1, max_mult: Optional[int] = None,
                      domain_end=None) -> PLFunction:
    """Counting function of ``a``-points with multiplicity in ``[min_mult, max_mult]``.

    ``reduced`` counts each distinct point once; otherwise with multiplicity.
    """
    P = a_points(f, as_target(a))
    if min_mult == 1 and max_mult is None and not reduced:
        return profile_counting(polygon_profile(P, p), True, domain_end)
    prof = zeros_profile(P, p).filtered(min_mult, max_mult)
    return profile_counting(prof, weighted=not reduced, domain_end=domain_end)


def reduced_N(f, a=INF, p=2, domain_end=None) -> PLFunction:
    """``N-bar(r, 1/(f-a))``: each distinct ``a``-point once."""
    return counting_function(f, a, p, reduced=True, domain_end=domain_end)


def _check_level(k):
    if k is not None and k < 1:
        raise ValueError("truncation level must be >= 1 or None for infinity")


def truncated_N_le(f, a, k: Optional[int], p=2, domain_end=None) -> PLFunction:
    """``N-bar_{k)}``: distinct ``a``-points of multiplicity at most ``k`` (``k=None`` is infinity)."""
    _check_level(k)
    return counting_function(f, a, p, reduced=True, max_mult=k, domain_end=domain_end)


def truncated_N_ge(f, a, k: Optional[int], p=2, domain_end=None) -> PLFunction:
    """``N-bar_{(k+1}``: distinct ``a``-points of multiplicity at least ``k+1``.

    For ``k = None`` (infinity) this is the zero function.
    """
    _check_level(k)
    if k is None:
        return PLFunction.zero(domain_end)
    return counting_function(f, a, p, reduced=True, min_mult=k + 1, domain_end=domain_end)


def truncated_count_ge(f, a, k: Optional[int], p=2, domain_end=None) -> PLFunction:
    """``N_{(k+1}``: points of multiplicity at least ``k+1``, counted with multiplicity."""
    _check_level(k)
    if k is None:
        return PLFunction.zero(domain_end)
    return counting_function(f, a, p, reduced=False, min_mult=k + 1, domain_end=domain_end)


def proximity_m(f: RationalFunction, p: Prime | int = 2, domain_end=None) -> PLFunction:
    """``m(r, f) = log+ |f|_r``; the zero function has ``m = 0``."""
    if f.is_zero():
        return PLFunction.zero(domain_end)
    return pl_pos(log_norm(f, p, domain_end))


def characteristic_T(f: RationalFunction, p: Prime | int = 2, domain_end=None) -> PLFunction:
    """``T(r, f) = m(r, f) + N(r, f)``."""
    T = pl_sum([proximity_m(f, p, domain_end), valence_N(f, INF, p, domain_end)])
    if domain_end is None and T.final_slope != f.degree:
        raise AssertionError(f"T({f}) has final slope {T.final_slope}, expected {f.degree}")
    return T


@dataclass(frozen=True)
class NevanlinnaReport:
    function: RationalFunction
    prime: int
    m: PLFunction
    N: PLFunction
    T: PLFunction
    targets: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.T != pl_sum([self.m, self.N]):
            raise AssertionError("T != m + N")


def nevanlinna_report(f: RationalFunction, p: Prime | int, targets: Sequence = (),
                      domain_end=None, levels: Sequence[int] = ()) -> NevanlinnaReport:
    """Bundle ``m, N, T`` of ``f`` with per-target ``N``, ``N-bar`` and truncations."""
    p = as_prime(p)
    m = proximity_m(f, p, domain_end)
    N = valence_N(f, INF, p, domain_end)
    T = pl_sum([m, N])
    per = {}
    for a in targets:
        a = as_target(a)
        g = f if a is INF else _reciprocal_shift(f, a)
        entry = {
            "N": valence_N(f, a, p, domain_end),
            "Nbar": reduced_N(f, a, p, domain_end),
            "m": proximity_m(g, p, domain_end),
        }
        entry["T"] = pl_sum([entry["m"], entry["N"]])
        for k in levels:
            entry[f"Nbar_le_{k}"] = truncated_N_le(f, a, k, p, domain_end)
            entry[f"Nbar_ge_{k + 1}"] = truncated_N_ge(f, a, k, p, domain_end)
        per[target_str(a)] = entry
    return NevanlinnaReport(f, int(p), m, N, T, per)


def _reciprocal_shift(f: RationalFunction, c) -> RationalFunction:
    d = f - c
    if d.is_zero():
        raise DegenerateInputError(f"{f} is identically {c}")
    return d.inverse()


def small_budget(targets: Sequence, p: Prime | int, domain_end=None) -> PLFunction:
    """``sum_i T(r, a_i) + 1`` over the finite targets; stands in for ``S(r, f)``."""
    terms = [PLFunction.constant(1, domain_end)]
    for a in targets:
        a = as_target(a)
        if a is not INF:
            terms.append(characteristic_T(a, p, domain_end))
    return pl_sum(terms, domain_end)


# -- theorem checkers -------------------------------------------------------------

def fmt_check(f: RationalFunction, c=INF, p: Prime | int = 2, domain_end=None) -> InequalityCertificate:
    """Compare ``T(r, 1/(f-c))`` with ``T(r, f)``; their difference must stay bounded."""
    c = as_target(c)
    lhs_fn = f if c is INF else _reciprocal_shift(f, c)
    lhs = characteristic_T(lhs_fn, p, domain_end)
    rhs = characteristic_T(f, p, domain_end)
    diff = pl_sub(lhs, rhs)
    lo, _ = diff.min_value()
    hi, _ = diff.max_value()
    return pl_compare(lhs, rhs, PLFunction.zero(domain_end), label=f"FMT c={target_str(c)}",
                      details={"gap_min": lo, "gap_max": hi,
                               "bounded": lo is not None and hi is not None})


def ldl_check(f: RationalFunction, k: int = 1, p: Prime | int = 2, domain_end=None) -> InequalityCertificate:
    """Certify ``m(r, f^(k)/f) <= 0`` on ``s >= 0``."""
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    if f.is_constant():
        raise DegenerateInputError("logarithmic derivative of a constant function")
    fk = f.nth_derivative(k)
    if fk.is_zero():
        raise DegenerateInputError(f"derivative of order {k} of {f} vanishes identically")
    m = proximity_m(fk / f, p, domain_end)
    return pl_compare(m, PLFunction.zero(domain_end), PLFunction.zero(domain_end),
                      label=f"LDL k={k}")


def _distinct(targets) -> list:
    out = [as_target(a) for a in targets]
    for i, a in enumerate(out):
        for b in out[:i]:
            if a is b or (a is not INF and b is not INF and a == b):
                raise ValueError(f"duplicate target {target_str(a)}")
    return out


def smt_constants_check(f: RationalFunction, targets: Sequence, p: Prime | int = 2,
                        domain_end=None) -> InequalityCertificate:
    """``(q-2) T(r,f) <= sum_j N-bar(r, 1/(f-a_j)) - s + O(1)`` for constant targets."""
    targets = _distinct(targets)
    q = len(targets)
    if q < 3:
        raise ValueError(f"need at least 3 targets, got {q}")
    for a in targets:
        if a is not INF and not a.is_constant():
            raise ValueError(f"target {a} is not a constant")
    T = characteristic_T(f, p, domain_end)
    lhs = T * (q - 2)
    nbars = [reduced_N(f, a, p, domain_end) for a in targets]
    rhs = pl_sub(pl_sum(nbars, domain_end), PLFunction.linear(1, 0, domain_end))
    return pl_compare(lhs, rhs, small_budget(targets, p, domain_end),
                      label=f"SMT constants q={q}",
                      details={"targets": [target_str(a) for a in targets]})


def final_slope_ratio(a, f: RationalFunction, p: Prime | int = 2) -> Fraction:
    """Ratio of the growth rates of ``T(r, a)`` and ``T(r, f)``; 0 for ``INF``."""
    if a is INF:
        return Fraction(0)
    if f.degree == 0:
        raise ValueError("smallness ratio against a constant function")
    return Fraction(as_target(a).degree, f.degree)
