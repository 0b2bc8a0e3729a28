from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from padic_nevanlinna.pl import (PLFunction, Verdict, VerdictKind, minimal_budget_ratio, pl_add, pl_compare,
                                 pl_eval, pl_hinge, pl_max, pl_max_all, pl_min, pl_min_all, pl_pos, pl_scale,
                                 pl_sub, pl_sum)

s = PLFunction.linear(1)
Q = Fraction

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def pl_functions(draw, domain_end=None):
    n = draw(st.integers(0, 5))
    starts = sorted(set(draw(st.lists(st.fractions(min_value=0, max_value=30, max_denominator=8)
                                      .filter(lambda x: x > 0), min_size=n, max_size=n))))
    if domain_end is not None:
        starts = [x for x in starts if x < domain_end]
    slopes = draw(st.lists(small_q, min_size=len(starts) + 1, max_size=len(starts) + 1))
    return PLFunction(draw(small_q), list(zip([Q(0)] + starts, slopes)), domain_end)


def sample_points(*fs):
    pts = {Q(0), Q(1, 3), Q(7, 2), Q(50)}
    for f in fs:
        for k in f.knots():
            pts |= {k, k + Q(1, 7)}
    end = min((f.domain_end for f in fs if f.domain_end is not None), default=None)
    return sorted(x for x in pts if end is None or x <= end)


# -- examples -------------------------------------------------------------------------

def test_add_examples():
    assert pl_add(PLFunction.linear(2), PLFunction.constant(3)) == PLFunction.linear(2, 3)
    f = pl_hinge(1)
    assert pl_add(f, PLFunction.zero()) == f
    g = pl_min(s, PLFunction.constant(2))
    assert pl_add(f, g)(3) == 4


def test_lattice_examples():
    assert pl_pos(s - 1) == pl_hinge(1)
    assert pl_pos(s - 1)(Q(1, 2)) == 0
    f = pl_hinge(2, 3)
    assert pl_max(f, f) == f
    assert pl_scale(Q(2, 5), PLFunction.linear(5)) == PLFunction.linear(2)


def test_eval_examples():
    assert pl_eval(PLFunction.linear(2, 1), 3) == 7
    assert pl_eval(pl_hinge(1), Q(1, 2)) == 0


def test_canonical_form_merges_collinear_pieces():
    f = PLFunction(1, [(0, 2), (1, 2), (3, 2)])
    assert f.pieces == ((0, 2),)
    assert f == PLFunction.linear(2, 1)
    assert hash(f) == hash(PLFunction.linear(2, 1))


def test_domain_end_drops_pieces_and_rejects_outside_points():
    f = PLFunction(0, [(0, 1), (5, 3)], domain_end=4)
    assert f.pieces == ((0, 1),)
    with pytest.raises(ValueError):
        f(5)
    with pytest.raises(ValueError):
        f(-1)


def test_invalid_construction():
    with pytest.raises(ValueError):
        PLFunction(0, [(1, 1)])
    with pytest.raises(ValueError):
        PLFunction(0, [(0, 1), (0, 2)])
    with pytest.raises(ValueError):
        PLFunction(0, [(0, 1)], domain_end=0)


def test_min_max_and_unbounded_cases():
    f = PLFunction(3, [(0, -1), (2, 1)])
    assert f.min_value() == (1, 2)
    assert f.max_value() == (None, None)
    assert PLFunction.linear(-1).min_value() == (None, None)
    assert PLFunction.linear(-1, 0, 4).min_value() == (-4, 4)


def test_sum_of_nothing_is_zero():
    assert pl_sum([]).is_zero()
    assert pl_sum([], 3) == PLFunction.zero(3)


def test_hinge_with_nonpositive_corner_is_affine():
    assert pl_hinge(-2, 3) == PLFunction.linear(3, 6)


def test_from_points_interpolates():
    f = PLFunction.from_points([(Q(0), Q(0)), (Q(1), Q(2)), (Q(3), Q(2))], 1)
    assert f(Q(1, 2)) == 1 and f(2) == 2 and f(5) == 4


def test_operator_sugar():
    f = PLFunction.linear(2)
    assert f + 1 == PLFunction.linear(2, 1)
    assert 1 - f == PLFunction.linear(-2, 1)
    assert 3 * f == PLFunction.linear(6)
    assert -f == PLFunction.linear(-2)


# -- compare ----------------------------------------------------------------------------

def test_compare_examples():
    c = pl_compare(PLFunction.linear(2), PLFunction.linear(3), PLFunction.zero())
    assert c.verdict.kind is VerdictKind.HOLDS_EXACTLY
    c = pl_compare(PLFunction.linear(2, 5), PLFunction.linear(2), PLFunction.zero())
    assert c.verdict == Verdict(VerdictKind.HOLDS_UP_TO_CONSTANT, constant=Q(5))
    c = pl_compare(PLFunction.linear(3), PLFunction.linear(2), PLFunction.linear(1))
    assert c.verdict == Verdict(VerdictKind.HOLDS_WITHIN_SMALL_BUDGET, ratio=Q(1))


def test_compare_violation_carries_witness():
    c = pl_compare(PLFunction.linear(3), PLFunction.linear(1), PLFunction.linear(1))
    assert c.verdict.kind is VerdictKind.VIOLATED
    w = c.verdict.witness
    assert c.slack(w) + c.small_budget(w) < 0
    assert c.budget_ratio == 2


def test_compare_on_bounded_window_uses_endpoint():
    c = pl_compare(PLFunction.linear(2), PLFunction.constant(10), None)
    assert c.verdict.kind is VerdictKind.VIOLATED
    c = pl_compare(PLFunction.linear(2, 0, 5), PLFunction.constant(10))
    assert c.verdict.kind is VerdictKind.HOLDS_EXACTLY


def test_verdict_strength_order():
    kinds = [VerdictKind.VIOLATED, VerdictKind.HOLDS_WITHIN_SMALL_BUDGET,
             VerdictKind.HOLDS_UP_TO_CONSTANT, VerdictKind.HOLDS_EXACTLY]
    for i, k in enumerate(kinds):
        v = Verdict(k)
        assert all(v.at_least(j) for j in kinds[:i + 1])
        assert not any(v.at_least(j) for j in kinds[i + 1:])


# -- properties ---------------------------------------------------------------------------

@given(pl_functions(), pl_functions())
def test_sum_and_difference_are_pointwise(f, g):
    h, d = pl_add(f, g), pl_sub(f, g)
    for x in sample_points(f, g):
        assert h(x) == f(x) + g(x)
        assert d(x) == f(x) - g(x)
    assert h.final_slope == f.final_slope + g.final_slope


@given(pl_functions(), pl_functions())
def test_max_min_are_pointwise_including_crossings(f, g):
    hi, lo = pl_max(f, g), pl_min(f, g)
    for x in sample_points(f, g, hi, lo):
        assert hi(x) == max(f(x), g(x))
        assert lo(x) == min(f(x), g(x))
    assert pl_add(hi, lo) == pl_add(f, g)


@given(pl_functions(domain_end=Q(12)), pl_functions())
def test_mixed_domains_take_the_intersection(f, g):
    h = pl_add(f, g)
    assert h.domain_end == 12
    for x in sample_points(f, g):
        assert h(x) == f(x) + g(x)


@given(pl_functions(), small_q)
def test_scale_is_pointwise(f, c):
    g = pl_scale(c, f)
    for x in sample_points(f):
        assert g(x) == c * f(x)


@given(st.lists(pl_functions(), min_size=1, max_size=4))
def test_max_all_min_all(fs):
    hi, lo = pl_max_all(fs), pl_min_all(fs)
    for x in sample_points(*fs):
        assert hi(x) == max(f(x) for f in fs)
        assert lo(x) == min(f(x) for f in fs)


@given(pl_functions())
def test_representation_is_canonical(f):
    # re-inserting a redundant breakpoint yields the identical object
    x = f.breakpoints[-1] + 1
    pieces = list(f.pieces) + [(x, f.final_slope)]
    assert PLFunction(f.value_at_0, pieces, f.domain_end) == f
    assert all(a[1] != b[1] for a, b in zip(f.pieces, f.pieces[1:]))


@given(pl_functions(), pl_functions(), pl_functions())
def test_compare_verdict_is_consistent(lhs, rhs, budget):
    c = pl_compare(lhs, rhs, budget)
    slack = c.slack
    pts = sample_points(lhs, rhs, budget)
    k = c.verdict.kind
    if k is VerdictKind.HOLDS_EXACTLY:
        assert all(slack(x) >= 0 for x in pts)
    elif k is VerdictKind.HOLDS_UP_TO_CONSTANT:
        assert all(slack(x) + c.verdict.constant >= 0 for x in pts)
        assert c.final_slope_gap >= 0
    elif k is VerdictKind.HOLDS_WITHIN_SMALL_BUDGET:
        rho = c.verdict.ratio
        assert rho <= 1
        assert all(slack(x) + rho * c.small_budget(x) >= 0 for x in pts)
    else:
        w = c.verdict.witness
        assert w is not None and slack(w) + c.small_budget(w) < 0


@given(pl_functions(), pl_functions())
def test_budget_ratio_is_minimal(slack, budget):
    rho = minimal_budget_ratio(slack, budget)
    assume(rho is not None)
    pts = sample_points(slack, budget)
    assert all(slack(x) + rho * budget(x) >= 0 for x in pts)
    if rho > 0:
        smaller = rho * Q(999, 1000)
        tail = [(slack.final_slope + smaller * budget.final_slope)] if slack.domain_end is None else []
        assert any(slack(x) + smaller * budget(x) < 0 for x in slack.knots() + budget.knots()) or \
            any(t < 0 for t in tail)
