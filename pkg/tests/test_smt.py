import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gen import rand_rf
from padic_nevanlinna.nevanlinna import DegenerateInputError
from padic_nevanlinna.pl import PLFunction, VerdictKind
from padic_nevanlinna.poly import window_product
from padic_nevanlinna.rational import RationalFunction
from padic_nevanlinna.smt import (Degeneracy, DegenerateFamilyError, H_factored_form, H_shifted_form,
                                  SmallFunctionFamily, build_H, degeneracy_case, delta_bound_check, delta_r,
                                  lemma1_check, moebius_normalize, standard_moebius, subset_index_counts,
                                  theorem1_check)
from padic_nevanlinna.valued import INF

z = RationalFunction.z()
c = RationalFunction.constant
Q = Fraction

seeds = st.integers(0, 10 ** 9)


# -- Moebius normalization ----------------------------------------------------------------------

def test_normalization_example():
    F, M = moebius_normalize(z, 0, 1, 2)
    assert F == 2 * (z - 1) / z
    assert M(0) is INF and M(1) == 0 and M(2) == 1


@pytest.mark.parametrize("targets", [(INF, 0, 1), (0, INF, 1), (0, 1, INF), (z, z + 1, 2 * z)])
def test_standard_moebius_sends_targets_to_inf_zero_one(targets):
    M = standard_moebius(*targets)
    assert M(targets[0]) is INF
    assert M(targets[1]) == 0
    assert M(targets[2]) == 1


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_moebius_inverse_round_trips(seed):
    rng = random.Random(seed)
    M = standard_moebius(*rng.sample([INF, c(0), c(1), c(2), z, z + 3], 3))
    w = rand_rf(rng, max_deg=2)
    image = M(w)
    if image is INF:
        return
    assert M.inverse()(image) == w


def test_moebius_rejects_repeated_targets():
    with pytest.raises(ValueError):
        standard_moebius(0, 0, 1)
    with pytest.raises(DegenerateInputError):
        moebius_normalize(z, z, 0, 1)


# -- H ----------------------------------------------------------------------------------------

def test_H_vanishes_for_constant_a4_a5():
    assert build_H(z, c(2), c(3)).is_zero()
    assert build_H(z ** 2 + 1, c(Q(1, 2)), c(-1)).is_zero()


def test_H_nonzero_example():
    assert not build_H(z ** 3, z, 2 * z).is_zero()


def test_H_input_guards():
    with pytest.raises(DegenerateInputError):
        build_H(c(2), z, z + 1)
    with pytest.raises(DegenerateInputError):
        build_H(z, c(1), z + 1)
    with pytest.raises(DegenerateInputError):
        build_H(z, z + 1, z + 1)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_printed_expansion_is_minus_H(seed):
    rng = random.Random(seed)
    f = rand_rf(rng, max_deg=3)
    a4, a5 = rand_rf(rng, max_deg=2), rand_rf(rng, max_deg=2)
    try:
        H = build_H(f, a4, a5)
        printed = H_factored_form(f, a4, a5)
    except DegenerateInputError:
        return
    assert printed == -H


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_row_rewrite_around_a_target_keeps_H(seed):
    # the rewrite subtracts row(a_i), which is zero or an existing row for these targets
    rng = random.Random(seed)
    f = rand_rf(rng, max_deg=3)
    a4, a5 = rand_rf(rng, max_deg=2), rand_rf(rng, max_deg=2)
    try:
        H = build_H(f, a4, a5)
    except DegenerateInputError:
        return
    for ai in (c(0), c(1), a4, a5):
        assert H_shifted_form(f, a4, a5, ai) == H


def test_row_rewrite_around_another_target_changes_H():
    f, a4, a5 = z ** 3, z, z + 2
    assert H_shifted_form(f, a4, a5, c(2)) != build_H(f, a4, a5)


# -- degeneracy ----------------------------------------------------------------------------------

@pytest.mark.parametrize("a4, a5, case", [
    (z, 2 * z, Degeneracy.CASE1),
    (z + 1, 2 * z + 1, Degeneracy.CASE2),
    (z, z / (2 - z), Degeneracy.CASE3),
    (z, z + 2, Degeneracy.NON_DEGENERATE),
    (z ** 2 + 2, z + 5, Degeneracy.NON_DEGENERATE),
])
def test_degeneracy_cases(a4, a5, case):
    assert degeneracy_case(z ** 3, a4, a5).case is case


def test_identity_cases_are_checked_before_H():
    # a4 = 2 a5 is a ratio identity even though H does not vanish
    v = degeneracy_case(z ** 3, z, 2 * z)
    assert v.degenerate and not v.h_vanishes


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_nondegenerate_implies_H_nonzero(seed):
    rng = random.Random(seed)
    f, a4, a5 = rand_rf(rng, max_deg=3), rand_rf(rng, max_deg=2), rand_rf(rng, max_deg=2)
    try:
        v = degeneracy_case(f, a4, a5)
    except DegenerateInputError:
        return
    if not v.degenerate:
        assert not build_H(f, a4, a5).is_zero()


# -- delta(r) ---------------------------------------------------------------------------------

def test_delta_examples():
    assert delta_r(c(2), c(3), 2) == PLFunction.constant(-1)
    assert delta_r(c(2), c(3), 5).is_zero()
    assert delta_r(z + 2, z + 3, 2).is_zero()
    with pytest.raises(DegenerateInputError):
        delta_r(c(2), c(2), 2)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([2, 3, 5]))
def test_delta_bound_holds(seed, p):
    rng = random.Random(seed)
    a4, a5 = rand_rf(rng, max_deg=2), rand_rf(rng, max_deg=2)
    try:
        cert = delta_bound_check(a4, a5, p)
    except DegenerateInputError:
        return
    assert cert.verdict.kind is VerdictKind.HOLDS_EXACTLY


# -- Lemma 1 and Theorem 1 -----------------------------------------------------------------------

def test_lemma1_constant_targets_use_the_constants_path():
    cert = lemma1_check(z ** 2, [INF, 0, 1, 2, 3], 3)
    assert cert.details["path"] == "constants"
    assert cert.details["fallback"].verdict.holds
    assert cert.verdict.holds


def test_lemma1_determinant_path_records_intermediates():
    cert = lemma1_check(z ** 3 + z, [INF, 0, 1, z + 2, z ** 2 + 3], 5)
    assert cert.details["path"] == "determinant"
    assert cert.verdict.kind is VerdictKind.HOLDS_EXACTLY
    for key in ("four_T", "T_H_bound", "delta_bound"):
        assert cert.details[key].verdict.holds


def test_lemma1_degenerate_family_raises():
    with pytest.raises(DegenerateFamilyError) as info:
        lemma1_check(z ** 3, [INF, 0, 1, z, 2 * z], 2)
    assert info.value.verdict.case is Degeneracy.CASE1


def test_lemma1_needs_five_targets():
    with pytest.raises(ValueError):
        lemma1_check(z ** 2, [INF, 0, 1, 2], 2)
    with pytest.raises(ValueError):
        lemma1_check(z ** 2, [INF, 0, 1, 2, 2], 2)


def test_subset_counts():
    assert subset_index_counts(6, 5) == [5] * 6
    assert subset_index_counts(7, 4) == [20] * 7


def test_theorem1_averaged_equals_lemma1_for_five_targets():
    fam = [INF, 0, 1, z + 2, z ** 2 + 3]
    f = z ** 3 + z
    avg = theorem1_check(f, fam, 5, mode="averaged")
    lem = lemma1_check(f, fam, 5)
    assert avg.lhs == lem.lhs and avg.rhs == lem.rhs
    assert avg.verdict == lem.verdict


def test_theorem1_window_product_six_targets():
    F = RationalFunction(window_product(8, 5))
    fam = [INF, 0, 1, 2, 3, 4]
    for mode in ("direct", "averaged"):
        cert = theorem1_check(F, fam, 5, mode=mode, domain_end=8)
        assert cert.verdict.holds


def test_theorem1_input_errors():
    with pytest.raises(ValueError):
        theorem1_check(z, [INF, 0, 1, 2], 2)
    with pytest.raises(ValueError):
        theorem1_check(z, [INF, 0, 1, 2, 3], 2, mode="sideways")


def test_family_ratios():
    fam = SmallFunctionFamily.build([INF, 0, z + 1], z ** 4, 2)
    assert fam.ratios == (0, 0, Q(1, 4))
    assert len(fam) == 3 and fam[2] == z + 1
    with pytest.raises(DegenerateInputError):
        SmallFunctionFamily.build([0, 1], c(3))


def test_vanishing_H_without_identity_is_logged(monkeypatch, caplog):
    import padic_nevanlinna.smt as smt
    monkeypatch.setattr(smt, "build_H", lambda f, a4, a5: c(0))
    with caplog.at_level("WARNING", logger="padic_nevanlinna.smt"):
        v = degeneracy_case(z ** 3, z, z + 2)
    assert v.case is Degeneracy.CASE4_CONSISTENT and v.h_vanishes
    assert "Case4Consistent" in caplog.text
