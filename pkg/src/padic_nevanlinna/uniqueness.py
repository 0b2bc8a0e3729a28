"""Sharing small functions: sharing sets, the auxiliary function AuxT, and
the uniqueness decision procedures.

``AuxT`` is the auxiliary function of the uniqueness lemma; it is renamed so it
cannot be mistaken for the characteristic function ``T(r, f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from typing import Optional, Sequence

from .nevanlinna import (DegenerateInputError, characteristic_T, proximity_m, reduced_N,
                         small_budget, truncated_N_ge, truncated_N_le, valence_N)
from .pl import InequalityCertificate, PLFunction, pl_compare, pl_scale, pl_sum
from .poly import Polynomial, poly_gcd, squarefree_decompose
from .rational import RationalFunction, a_points, as_target, target_str
from .smt import MoebiusTransform, SmallFunctionFamily, standard_moebius, subset_index_counts
from .valued import INF, Prime, as_prime

Level = Optional[int]  # None stands for +infinity


# -- sharing sets -------------------------------------------------------------------

@dataclass(frozen=True)
class SharingSpec:
    a: object
    k: Level = None

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValueError("sharing level must be >= 1 or None")


@dataclass(frozen=True)
class SharingWitness:
    """Outcome of comparing two filtered radicals.

    ``f_only``/``g_only`` are the monic radicals of the points in one set
    but not the other; ``witness`` is their product.
    """

    equal: bool
    f_radical: Polynomial
    g_radical: Polynomial
    f_only: Polynomial
    g_only: Polynomial

    @property
    def witness(self) -> Polynomial:
        return self.f_only * self.g_only


def filtered_radical(f: RationalFunction, a, k: Level = None) -> Polynomial:
    """Monic product of the distinct ``a``-points of ``f`` with multiplicity ``<= k``."""
    P = a_points(f, as_target(a))
    out = Polynomial.constant(1)
    for Fi, i in squarefree_decompose(P):
        if k is None or i <= k:
            out = out * Fi
    return out


def sharing_set_equal(f: RationalFunction, g: RationalFunction, spec: SharingSpec) -> SharingWitness:
    """Compare the sets of distinct ``a``-points with multiplicity at most ``k``.

    Equality of monic radicals over the rationals is equality of the point
    sets over the algebraic closure.
    """
    rf = filtered_radical(f, spec.a, spec.k)
    rg = filtered_radical(g, spec.a, spec.k)
    if rf == rg:
        one = Polynomial.constant(1)
        return SharingWitness(True, rf, rg, one, one)
    common = poly_gcd(rf, rg)
    return SharingWitness(False, rf, rg, rf.exact_div(common), rg.exact_div(common))


def shares(f, g, a, k: Level = None) -> bool:
    return sharing_set_equal(f, g, SharingSpec(as_target(a), k)).equal


def moebius_L(a1, a2, a3) -> MoebiusTransform:
    """``L(w) = (w-a1)/(w-a2) * (a3-a2)/(a3-a1)``: sends ``a1, a2, a3`` to ``0, INF, 1``."""
    return standard_moebius(to_inf=a2, to_zero=a1, to_one=a3)


# -- AuxT and Q ---------------------------------------------------------------------

def _check_aux_inputs(f, g, a):
    if f.is_constant() or g.is_constant():
        raise DegenerateInputError("f and g must be nonconstant")
    if a is INF or a.is_zero() or a == 1:
        raise DegenerateInputError("a must avoid 0, 1 and INF")
    for u in (f, g):
        if u.is_zero() or u == 1 or u == a:
            raise DegenerateInputError(f"{u} makes a denominator of AuxT vanish")


def build_aux_T(f: RationalFunction, g: RationalFunction, a: RationalFunction) -> RationalFunction:
    """AuxT as the difference of its two logarithmic-derivative quotients."""
    a = as_target(a)
    _check_aux_inputs(f, g, a)
    df, dg, da = f.derivative(), g.derivative(), a.derivative()
    d = f - g
    first = df * (da * g - a * dg) * d / (f * (f - 1) * g * (g - a))
    second = dg * (da * f - a * df) * d / (g * (g - 1) * f * (f - a))
    return first - second


def Q_factored(f, g, a) -> RationalFunction:
    df, dg, da = f.derivative(), g.derivative(), a.derivative()
    return df * (da * g - a * dg) * (f - a) * (g - 1) - dg * (da * f - a * df) * (g - a) * (f - 1)


def Q_expanded(f, g, a) -> RationalFunction:
    """The ten-monomial expansion of Q."""
    df, dg, da = f.derivative(), g.derivative(), a.derivative()
    aa = a * (a - 1)
    return (da * f * df * g * g - da * f * df * g - aa * f * df * dg - a * da * df * g * g
            + a * da * df * g - da * f * f * g * dg + da * f * g * dg + aa * df * g * dg
            + a * da * f * f * dg - a * da * f * dg)


def build_Q(f: RationalFunction, g: RationalFunction, a: RationalFunction) -> RationalFunction:
    """Q in factored form, after asserting it matches the expanded form."""
    a = as_target(a)
    _check_aux_inputs(f, g, a)
    q1, q2 = Q_factored(f, g, a), Q_expanded(f, g, a)
    if q1 != q2:
        raise AssertionError("factored and expanded Q disagree")
    return q1


def aux_T_quotient(f, g, a) -> RationalFunction:
    """AuxT as ``(f-g) Q / (f (f-1) (f-a) g (g-1) (g-a))``."""
    a = as_target(a)
    Q = build_Q(f, g, a)
    return (f - g) * Q / (f * (f - 1) * (f - a) * g * (g - 1) * (g - a))


def aux_T_regrouped(f, g, a) -> RationalFunction:
    """AuxT written through logarithmic derivatives only (the form bounding ``m(r, AuxT)``)."""
    a = as_target(a)
    _check_aux_inputs(f, g, a)
    df, dg, da = f.derivative(), g.derivative(), a.derivative()
    lf1, lf, lg1, lg = df / (f - 1), df / f, dg / (g - 1), dg / g
    lfa, lga = (df - da) / (f - a), (dg - da) / (g - a)
    return (lf1 * (lg - lga) - (lf1 - lf) * (da - a * lga)
            + lg1 * (lf - lfa) - (lg1 - lg) * (da - a * lfa))


def aux_m_small_check(f, g, a, p: Prime | int = 2, domain_end=None) -> InequalityCertificate:
    """``m(r, AuxT)`` against the budget of ``a`` and ``a'``."""
    a = as_target(a)
    aux = build_aux_T(f, g, a)
    if aux.is_zero():
        raise DegenerateInputError("AuxT vanishes identically")
    m = proximity_m(aux, p, domain_end)
    budget = small_budget([a, a.derivative()], p, domain_end)
    return pl_compare(m, PLFunction.zero(domain_end), budget, label="m(r, AuxT) small",
                      details={"regrouped_agrees": aux_T_regrouped(f, g, a) == aux})


def _normalize_pair(f, g, targets):
    L = moebius_L(*targets[:3])
    F, G = L(f), L(g)
    if F is INF or G is INF:
        raise DegenerateInputError("f or g coincides with a normalization target")
    return L, F, G


def aux_N_bound_check(f, g, targets: Sequence, levels: Sequence[Level], p: Prime | int = 2,
                      domain_end=None) -> InequalityCertificate:
    """``N(r, AuxT) <= sum_j (N-bar_{(k_j+1}(f, a_j) + same for g) + budget``.

    The four targets are first moved to ``0, INF, 1, a``; counts are taken in
    those coordinates.
    """
    if len(targets) != 4 or len(levels) != 4:
        raise ValueError("AuxT pole bound takes four targets and four levels")
    targets = [as_target(t) for t in targets]
    L, F, G = _normalize_pair(f, g, targets)
    normalized = [RationalFunction.constant(0), INF, RationalFunction.constant(1), L(targets[3])]
    a = normalized[3]
    aux = build_aux_T(F, G, a)
    if aux.is_zero():
        raise DegenerateInputError("AuxT vanishes identically")
    lhs = valence_N(aux, INF, p, domain_end)
    terms = []
    for b, k in zip(normalized, levels):
        terms.append(truncated_N_ge(F, b, k, p, domain_end))
        terms.append(truncated_N_ge(G, b, k, p, domain_end))
    budget = small_budget([a, a.derivative()], p, domain_end)
    return pl_compare(lhs, pl_sum(terms, domain_end), budget, label="N(r, AuxT) bound",
                      details={"normalized_a": target_str(a)})


# -- Lemma 2 --------------------------------------------------------------------------

class SharingHypothesisError(ValueError):
    def __init__(self, index: int, witness: SharingWitness):
        self.index = index
        self.witness = witness
        super().__init__(f"sharing fails for target #{index}: f-side {witness.f_only}, "
                         f"g-side {witness.g_only}")


def _levels(levels, q) -> list[Level]:
    levels = list(levels)
    if len(levels) != q:
        raise ValueError(f"expected {q} truncation levels, got {len(levels)}")
    return levels


def verify_sharing(f, g, members, levels) -> list[SharingWitness]:
    out = []
    for j, (a, k) in enumerate(zip(members, levels)):
        w = sharing_set_equal(f, g, SharingSpec(a, k))
        if not w.equal:
            raise SharingHypothesisError(j, w)
        out.append(w)
    return out


def _lemma2_sides(u, v, members, levels, subset, p, domain_end):
    outside = [j for j in range(len(members)) if j not in subset]
    lhs = pl_sum([truncated_N_le(u, members[j], levels[j], p, domain_end) for j in outside], domain_end)
    rhs = pl_sum([truncated_N_ge(w, members[j], levels[j], p, domain_end)
                  for j in subset for w in (u, v)], domain_end)
    return lhs, rhs


def lemma2_check(f: RationalFunction, g: RationalFunction, family, levels: Sequence[Level],
                 subset: Sequence[int] = (0, 1, 2, 3), p: Prime | int = 2, domain_end=None,
                 intermediates: bool = True) -> InequalityCertificate:
    """Truncated counts outside a 4-subset against high-multiplicity counts inside it.

    The certificate is for the ``f`` counts; the ``g`` counts are recorded
    in ``details["g_side"]``.
    """
    members = family.members if isinstance(family, SmallFunctionFamily) else \
        SmallFunctionFamily.build(family).members
    q = len(members)
    levels = _levels(levels, q)
    subset = tuple(subset)
    if len(set(subset)) != 4 or not all(0 <= i < q for i in subset):
        raise ValueError("subset must name four distinct target indices")
    if f == g:
        raise ValueError("Lemma 2 needs f != g")
    verify_sharing(f, g, members, levels)
    budget = small_budget(members, p, domain_end)
    lhs, rhs = _lemma2_sides(f, g, members, levels, subset, p, domain_end)
    glhs, grhs = _lemma2_sides(g, f, members, levels, subset, p, domain_end)
    details: dict = {"subset": list(subset),
                     "g_side": pl_compare(glhs, grhs, budget, label="Lemma 2 (g counts)")}
    if intermediates:
        details.update(_lemma2_intermediates(f, g, [members[i] for i in subset],
                                             [levels[i] for i in subset], p, domain_end))
    return pl_compare(lhs, rhs, budget, label="Lemma 2", details=details)


def _lemma2_intermediates(f, g, targets, levels, p, domain_end) -> dict:
    try:
        L, F, G = _normalize_pair(f, g, targets)
        a = L(targets[3])
        aux = build_aux_T(F, G, a)
    except DegenerateInputError as exc:
        return {"aux": f"skipped: {exc}"}
    if aux.is_zero():
        return {"aux": "AuxT vanishes identically"}
    return {"aux_m": aux_m_small_check(F, G, a, p, domain_end),
            "aux_N": aux_N_bound_check(f, g, targets, levels, p, domain_end)}


def theorem2_averaged_check(f, g, family, levels, p: Prime | int = 2,
                            domain_end=None) -> InequalityCertificate:
    """Lemma 2 summed over every 4-subset and divided by ``C(q-1, 3)``.

    The result reads ``(q-4)/4 * sum_j N-bar_{k_j)} <= sum_j (N-bar_{(k_j+1}(f) + N-bar_{(k_j+1}(g))``.
    """
    members = SmallFunctionFamily.build(family).members if not isinstance(family, SmallFunctionFamily) \
        else family.members
    q = len(members)
    if q < 5:
        raise ValueError("need q >= 5")
    levels = _levels(levels, q)
    per_index = comb(q - 1, 3)
    if subset_index_counts(q, 4) != [per_index] * q:
        raise AssertionError("4-subset index counts differ from C(q-1,3)")
    subs = [lemma2_check(f, g, members, levels, S, p, domain_end, intermediates=False)
            for S in combinations(range(q), 4)]
    w = Fraction(1, per_index)
    lhs = pl_scale(w, pl_sum([c.lhs for c in subs], domain_end))
    rhs = pl_scale(w, pl_sum([c.rhs for c in subs], domain_end))
    budget = pl_scale(w, pl_sum([c.small_budget for c in subs], domain_end))
    direct_lhs = pl_scale(Fraction(q - 4, 4), pl_sum(
        [truncated_N_le(f, a, k, p, domain_end) for a, k in zip(members, levels)], domain_end))
    direct_rhs = pl_sum([truncated_N_ge(u, a, k, p, domain_end)
                         for a, k in zip(members, levels) for u in (f, g)], domain_end)
    if lhs != direct_lhs or rhs != direct_rhs:
        raise AssertionError("averaged Lemma 2 sums disagree with the closed form")
    return pl_compare(lhs, rhs, budget, label=f"Lemma 2 averaged q={q}",
                      details={"subsets": len(subs), "per_index": per_index})


# -- Theorem 2 / 3 arithmetic ------------------------------------------------------------

def _inv_level(k: Level) -> Fraction:
    return Fraction(0) if k is None else Fraction(1, k + 1)


def theorem2_applicable(q: int, levels: Sequence[Level]) -> tuple[bool, Fraction]:
    """Test ``sum 1/(k_j+1) < 2q(q-4) / (5(q+4))``; returns ``(applicable, margin)``."""
    if q < 5:
        raise ValueError("Theorem 2 needs q >= 5")
    levels = _levels(levels, q)
    margin = Fraction(2 * q * (q - 4), 5 * (q + 4)) - sum((_inv_level(k) for k in levels), Fraction(0))
    return margin > 0, margin


def theorem3_threshold(q: int) -> Fraction:
    """``3(q+4) / (2(q-4))``; a common level ``k`` must exceed it."""
    if q < 5:
        raise ValueError("Theorem 3 needs q >= 5")
    return Fraction(3 * (q + 4), 2 * (q - 4))


def theorem3_minimal_level(q: int) -> int:
    return floor(theorem3_threshold(q)) + 1


def theorem3_applicable(q: int, k: Level) -> bool:
    return k is None or k > theorem3_threshold(q)


def lemma3_check(f: RationalFunction, family, k: Level, p: Prime | int = 2,
                 domain_end=None) -> InequalityCertificate:
    """``sum_i N-bar_{(k+1}(r, 1/(f-a_i)) <= 3q/(5k) T(r,f) + budget``."""
    members = family.members if isinstance(family, SmallFunctionFamily) else \
        SmallFunctionFamily.build(family).members
    q = len(members)
    if k is not None and k < 1:
        raise ValueError("k must be >= 1 or None")
    lhs = pl_sum([truncated_N_ge(f, a, k, p, domain_end) for a in members], domain_end)
    coeff = Fraction(0) if k is None else Fraction(3 * q, 5 * k)
    rhs = pl_scale(coeff, characteristic_T(f, p, domain_end))
    return pl_compare(lhs, rhs, small_budget(members, p, domain_end), label=f"Lemma 3 k={k}",
                      details={"q": q, "q_below_5": q < 5})


def theorem2_check(f, g, family, levels, p: Prime | int = 2, domain_end=None) -> InequalityCertificate:
    """The combined bound ``2q(q-4)/5 (T(f)+T(g)) <= (q+4) sum_j (N-bar_{(k_j+1}(f) + ...(g))``.

    Only meaningful for ``f != g`` sharing every target at its level.
    """
    members = SmallFunctionFamily.build(family).members
    q = len(members)
    levels = _levels(levels, q)
    T = pl_sum([characteristic_T(f, p, domain_end), characteristic_T(g, p, domain_end)], domain_end)
    lhs = pl_scale(Fraction(2 * q * (q - 4), 5), T)
    rhs = pl_scale(q + 4, pl_sum([truncated_N_ge(u, a, k, p, domain_end)
                                  for a, k in zip(members, levels) for u in (f, g)], domain_end))
    return pl_compare(lhs, rhs, small_budget(members, p, domain_end), label=f"Theorem 2 bound q={q}")


# -- decision --------------------------------------------------------------------------

class Decision(Enum):
    IDENTICAL = "Identical"
    INCONCLUSIVE = "Inconclusive"
    HYPOTHESES_FAILED = "HypothesesFailed"
    PAPER_CONTRADICTION = "PaperContradiction"


@dataclass(frozen=True)
class UniquenessVerdict:
    decision: Decision
    reason: str
    margin: Optional[Fraction] = None
    witness: Optional[SharingWitness] = None


def uniqueness_decide(f: RationalFunction, g: RationalFunction, family,
                      levels: Optional[Sequence[Level]] = None) -> UniquenessVerdict:
    """Apply the uniqueness theorems to one instance.

    With rational data only constant targets (and ``INF``) are verifiably
    small, so nonconstant targets make the instance inconclusive.
    """
    if f == g:
        return UniquenessVerdict(Decision.IDENTICAL, "f == g")
    members = SmallFunctionFamily.build(family).members
    q = len(members)
    levels = [None] * q if levels is None else _levels(levels, q)
    if q < 5:
        return UniquenessVerdict(Decision.INCONCLUSIVE, f"q = {q} < 5")
    if f.is_constant() or g.is_constant():
        return UniquenessVerdict(Decision.INCONCLUSIVE, "f or g is constant")
    if any(a is not INF and not a.is_constant() for a in members):
        return UniquenessVerdict(Decision.INCONCLUSIVE, "smallness of nonconstant targets is not verifiable")
    try:
        verify_sharing(f, g, members, levels)
    except SharingHypothesisError as exc:
        return UniquenessVerdict(Decision.HYPOTHESES_FAILED, str(exc), witness=exc.witness)
    ok2, margin = theorem2_applicable(q, levels)
    common = levels[0] if all(k == levels[0] for k in levels) else "mixed"
    ok3 = common != "mixed" and theorem3_applicable(q, common)
    if not (ok2 or ok3):
        return UniquenessVerdict(Decision.INCONCLUSIVE, "level condition not met", margin)
    return UniquenessVerdict(Decision.PAPER_CONTRADICTION,
                             "hypotheses verified and theorem applicable, yet f != g", margin)
