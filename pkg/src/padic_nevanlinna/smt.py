"""Second main theorem for small functions: the determinant H and its checkers.

The checkers compare exact PL functions; the ``S(r, f)`` allowance is the
measured small-function budget of :func:`nevanlinna.small_budget`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .nevanlinna import (DegenerateInputError, characteristic_T, log_norm, proximity_m,
                         reduced_N, small_budget, smt_constants_check)
from .pl import (InequalityCertificate, PLFunction, pl_compare, pl_min_all, pl_pos, pl_scale,
                 pl_sum)
from .rational import RationalFunction, as_target, target_str
from .valued import INF, Prime, as_prime

log = logging.getLogger(__name__)


# -- Moebius transforms --------------------------------------------------------------

@dataclass(frozen=True)
class MoebiusTransform:
    """``w -> (A w + B) / (C w + D)`` with rational-function coefficients."""

    A: RationalFunction
    B: RationalFunction
    C: RationalFunction
    D: RationalFunction

    def __call__(self, w):
        if w is INF:
            if self.C.is_zero():
                return INF
            return self.A / self.C
        w = as_target(w)
        den = self.C * w + self.D
        if den.is_zero():
            return INF
        return (self.A * w + self.B) / den

    def inverse(self) -> MoebiusTransform:
        return MoebiusTransform(self.D, -self.B, -self.C, self.A)


def _rf(x) -> RationalFunction:
    return RationalFunction.constant(x)


def standard_moebius(to_inf, to_zero, to_one) -> MoebiusTransform:
    """The transform sending three distinct targets to ``INF``, ``0`` and ``1``."""
    a1, a2, a3 = (as_target(a) for a in (to_inf, to_zero, to_one))
    for x, y in ((a1, a2), (a1, a3), (a2, a3)):
        if x is y or (x is not INF and y is not INF and x == y):
            raise ValueError("Moebius normalization needs three distinct targets")
    one, zero = _rf(1), _rf(0)
    if a1 is INF:
        return MoebiusTransform(one, -a2, zero, a3 - a2)
    if a2 is INF:
        return MoebiusTransform(zero, a3 - a1, one, -a1)
    if a3 is INF:
        return MoebiusTransform(one, -a2, one, -a1)
    k = (a3 - a1) / (a3 - a2)
    return MoebiusTransform(k, -k * a2, one, -a1)


def moebius_normalize(f: RationalFunction, a1, a2, a3) -> tuple[RationalFunction, MoebiusTransform]:
    """``F = (f-a2)/(f-a1) * (a3-a1)/(a3-a2)``: sends ``a1, a2, a3`` to ``INF, 0, 1``."""
    M = standard_moebius(a1, a2, a3)
    F = M(f)
    if F is INF:
        raise DegenerateInputError("f coincides with a normalization target")
    return F, M


# -- the determinant H -------------------------------------------------------------

def _check_H_inputs(f, a4, a5):
    if f.is_constant():
        raise DegenerateInputError("f must be nonconstant")
    for a in (a4, a5):
        if a is INF or a.is_zero() or a == 1:
            raise DegenerateInputError("a4, a5 must avoid 0, 1 and INF")
    if a4 == a5:
        raise DegenerateInputError("a4 and a5 coincide")


def _det3(m):
    (a, b, c), (d, e, g), (h, i, j) = m
    return a * (e * j - g * i) - b * (d * j - g * h) + c * (d * i - e * h)


def _row(u: RationalFunction) -> tuple:
    du = u.derivative()
    return (u * du, du, u * (u - 1))


def build_H(f: RationalFunction, a4: RationalFunction, a5: RationalFunction) -> RationalFunction:
    """The 3x3 determinant with rows ``(u u', u', u(u-1))`` for ``u = f, a4, a5``."""
    _check_H_inputs(f, a4, a5)
    return _det3((_row(f), _row(a4), _row(a5)))


def H_factored_form(f, a4, a5) -> RationalFunction:
    """The printed log-derivative expansion of H, evaluated literally.

    It equals ``-build_H(f, a4, a5)``: the printed bracket carries the opposite sign.
    """
    _check_H_inputs(f, a4, a5)
    if f.is_zero() or f == 1:
        raise DegenerateInputError("f must avoid 0 and 1")
    d4, d5, df = a4.derivative(), a5.derivative(), f.derivative()
    bracket = ((d4 / a4 - d5 / a5) * (df / (f - 1) - d5 / (a5 - 1))
               - (d4 / (a4 - 1) - d5 / (a5 - 1)) * (df / f - d5 / a5))
    return f * (f - 1) * a4 * (a4 - 1) * a5 * (a5 - 1) * bracket


def H_shifted_form(f, a4, a5, ai) -> RationalFunction:
    """H with its first row rewritten around ``a_i``: ``(g_i, f' - a_i', h_i)``."""
    _check_H_inputs(f, a4, a5)
    ai = as_target(ai)
    fi = f - ai
    dfi = f.derivative() - ai.derivative()
    g = fi * dfi + ai.derivative() * fi + ai * dfi
    h = fi * fi + (ai * 2 - 1) * fi
    return _det3(((g, dfi, h), _row(a4), _row(a5)))


# -- degeneracy ------------------------------------------------------------------

class Degeneracy(Enum):
    NON_DEGENERATE = "NonDegenerate"
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4_CONSISTENT = "Case4Consistent"


@dataclass(frozen=True)
class DegeneracyVerdict:
    case: Degeneracy
    identity: str
    h_vanishes: bool

    @property
    def degenerate(self) -> bool:
        return self.case is not Degeneracy.NON_DEGENERATE


def degeneracy_case(f: RationalFunction, a4: RationalFunction, a5: RationalFunction) -> DegeneracyVerdict:
    """Classify ``(f, a4, a5)`` by the identities that split the proof that ``H != 0``.

    The identities between ``a4, a5`` are tested first; with none of them,
    the verdict is NonDegenerate exactly when H does not vanish.
    """
    _check_H_inputs(f, a4, a5)
    H = build_H(f, a4, a5)
    d4, d5 = a4.derivative(), a5.derivative()
    D1 = d4 / a4 - d5 / a5
    D2 = d4 / (a4 - 1) - d5 / (a5 - 1)
    vanishes = H.is_zero()
    if D1.is_zero():
        return DegeneracyVerdict(Degeneracy.CASE1, "a4'/a4 == a5'/a5", vanishes)
    if D2.is_zero():
        return DegeneracyVerdict(Degeneracy.CASE2, "a4'/(a4-1) == a5'/(a5-1)", vanishes)
    if D1 == D2:
        return DegeneracyVerdict(Degeneracy.CASE3, "a4'/a4 - a5'/a5 == a4'/(a4-1) - a5'/(a5-1)", vanishes)
    if vanishes:
        # never expected: none of the identities holds, yet H vanishes
        log.warning("Case4Consistent input: f=%s a4=%s a5=%s", f, a4, a5)
        return DegeneracyVerdict(Degeneracy.CASE4_CONSISTENT, "H == 0 with no ratio identity", True)
    return DegeneracyVerdict(Degeneracy.NON_DEGENERATE, "", False)


class DegenerateFamilyError(DegenerateInputError):
    def __init__(self, verdict: DegeneracyVerdict, message: str = ""):
        self.verdict = verdict
        super().__init__(message or f"degenerate family: {verdict.case.value} ({verdict.identity})")


# -- delta(r) ----------------------------------------------------------------------

def _delta_terms(a4, a5):
    terms = [a4, a5, a4 - 1, a5 - 1, a4 - a5]
    if any(t.is_zero() for t in terms):
        raise DegenerateInputError("delta(r) needs a4, a5 off 0, 1 and a4 != a5")
    return terms


def delta_r(a4: RationalFunction, a5: RationalFunction, p: Prime | int = 2, domain_end=None) -> PLFunction:
    """``log_p delta(r)`` with ``delta = min(1, |a4|, |a5|, |a4-1|, |a5-1|, |a4-a5|)``."""
    terms = _delta_terms(a4, a5)
    return pl_min_all([PLFunction.zero(domain_end)] + [log_norm(t, p, domain_end) for t in terms])


def delta_bound_check(a4, a5, p: Prime | int = 2, domain_end=None) -> InequalityCertificate:
    """``log+ 1/delta <= sum of m(r, 1/t)`` over the five terms defining delta."""
    terms = _delta_terms(a4, a5)
    lhs = pl_pos(pl_scale(-1, delta_r(a4, a5, p, domain_end)))
    rhs = pl_sum([proximity_m(t.inverse(), p, domain_end) for t in terms], domain_end)
    return pl_compare(lhs, rhs, PLFunction.zero(domain_end), label="log+ 1/delta bound")


# -- families --------------------------------------------------------------------

@dataclass(frozen=True)
class SmallFunctionFamily:
    """Distinct targets with their growth ratios against ``f``.

    ``ratios[i]`` is the final slope of ``T(r, a_i)`` over that of ``T(r, f)``.
    """

    members: tuple
    ratios: tuple = ()

    @classmethod
    def build(cls, targets: Sequence, f: Optional[RationalFunction] = None,
              p: Prime | int = 2, domain_end=None) -> SmallFunctionFamily:
        members = tuple(as_target(a) for a in targets)
        for i, a in enumerate(members):
            for b in members[:i]:
                if a is b or (a is not INF and b is not INF and a == b):
                    raise ValueError(f"family members must be distinct: {target_str(a)}")
        ratios: tuple = ()
        if f is not None:
            Tf = characteristic_T(f, p, domain_end).final_slope
            if Tf == 0:
                raise DegenerateInputError("f must be nonconstant")
            ratios = tuple(Fraction(0) if a is INF else characteristic_T(a, p, domain_end).final_slope / Tf
                           for a in members)
        return cls(members, ratios)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


def _members(family) -> tuple:
    if isinstance(family, SmallFunctionFamily):
        return family.members
    return SmallFunctionFamily.build(family).members


# -- Lemma 1 and Theorem 1 ---------------------------------------------------------

def lemma1_check(f: RationalFunction, family, p: Prime | int = 2, domain_end=None,
                 intermediates: bool = True) -> InequalityCertificate:
    """``2 T(r,f) <= sum_{i<=5} N-bar(r, 1/(f-a_i)) + budget`` for five distinct targets.

    The family is normalized to ``(INF, 0, 1, b4, b5)``.  If ``b4`` or ``b5``
    is constant the constants-only second main theorem is recorded instead of
    the H analysis; degenerate families raise :class:`DegenerateFamilyError`.
    """
    members = _members(family)
    if len(members) != 5:
        raise ValueError(f"Lemma 1 takes exactly five targets, got {len(members)}")
    if f.is_constant():
        raise DegenerateInputError("f must be nonconstant")
    p = as_prime(p)
    T = characteristic_T(f, p, domain_end)
    nbars = [reduced_N(f, a, p, domain_end) for a in members]
    budget = small_budget(members, p, domain_end)
    details: dict = {"targets": [target_str(a) for a in members]}

    F, M = moebius_normalize(f, *members[:3])
    b4, b5 = M(members[3]), M(members[4])
    if b4.is_constant() or b5.is_constant():
        consts = [INF, _rf(0), _rf(1)] + [b for b in (b4, b5) if b.is_constant()]
        details["path"] = "constants"
        details["fallback"] = smt_constants_check(F, consts, p, domain_end)
    else:
        verdict = degeneracy_case(F, b4, b5)
        if verdict.degenerate:
            raise DegenerateFamilyError(verdict)
        details["path"] = "determinant"
        if intermediates:
            details.update(_lemma1_intermediates(F, b4, b5, p, domain_end))
    return pl_compare(pl_scale(2, T), pl_sum(nbars, domain_end), budget,
                      label="Lemma 1", details=details)


def _lemma1_intermediates(F, b4, b5, p, domain_end) -> dict:
    H = build_H(F, b4, b5)
    TF = characteristic_T(F, p, domain_end)
    TH = characteristic_T(H, p, domain_end)
    budget = small_budget([b4, b5, b4.derivative(), b5.derivative()], p, domain_end)
    rhs11 = pl_sum([reduced_N(F, a, p, domain_end) for a in (_rf(0), _rf(1), b4, b5)] + [TH],
                   domain_end)
    eq11 = pl_compare(pl_scale(4, TF), rhs11, budget, label="4T(F) <= sum N-bar + T(H)")
    rhs12 = pl_sum([pl_scale(2, TF), reduced_N(F, INF, p, domain_end)], domain_end)
    eq12 = pl_compare(TH, rhs12, budget, label="T(H) <= 2T(F) + N-bar(F)")
    return {"T_H": TH, "four_T": eq11, "T_H_bound": eq12,
            "delta_bound": delta_bound_check(b4, b5, p, domain_end)}


def subset_index_counts(q: int, size: int) -> list[int]:
    """How often each index occurs across all ``size``-subsets of ``range(q)``."""
    counts = [0] * q
    for S in combinations(range(q), size):
        for i in S:
            counts[i] += 1
    return counts


def theorem1_check(f: RationalFunction, family, p: Prime | int = 2, mode: str = "direct",
                   domain_end=None) -> InequalityCertificate:
    """``(2q/5) T(r,f) <= sum_i N-bar(r, 1/(f-a_i)) + budget`` for ``q >= 5`` targets.

    ``mode="averaged"`` sums Lemma 1 over every 5-subset and divides by
    ``C(q-1, 4)``, the number of subsets containing a given index.
    """
    members = _members(family)
    q = len(members)
    if q < 5:
        raise ValueError(f"Theorem 1 needs q >= 5 targets, got {q}")
    p = as_prime(p)
    T = characteristic_T(f, p, domain_end)
    nbar_sum = pl_sum([reduced_N(f, a, p, domain_end) for a in members], domain_end)
    coeff = Fraction(2 * q, 5)
    if mode == "direct":
        return pl_compare(pl_scale(coeff, T), nbar_sum, small_budget(members, p, domain_end),
                          label=f"Theorem 1 direct q={q}", details={"mode": "direct"})
    if mode != "averaged":
        raise ValueError(f"unknown mode {mode!r}")
    per_index = comb(q - 1, 4)
    counts = subset_index_counts(q, 5)
    if counts != [per_index] * q:
        raise AssertionError(f"subset counts {counts} != C(q-1,4) = {per_index}")
    subs = []
    for S in combinations(range(q), 5):
        subs.append(lemma1_check(f, [members[i] for i in S], p, domain_end, intermediates=False))
    lhs = pl_scale(Fraction(1, per_index), pl_sum([c.lhs for c in subs], domain_end))
    rhs = pl_scale(Fraction(1, per_index), pl_sum([c.rhs for c in subs], domain_end))
    budget = pl_scale(Fraction(1, per_index), pl_sum([c.small_budget for c in subs], domain_end))
    if lhs != pl_scale(coeff, T) or rhs != nbar_sum:
        raise AssertionError("averaged Lemma 1 sums disagree with the Theorem 1 sides")
    return pl_compare(lhs, rhs, budget, label=f"Theorem 1 averaged q={q}",
                      details={"mode": "averaged", "subsets": len(subs),
                               "per_index": per_index, "lemma1": subs})
