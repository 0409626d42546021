from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from mealy.automaton import act, builtin, dual_act, properties
from mealy.bellaterra import (
    SIX,
    WREATH_TABLE,
    F_solution,
    aleshin_relation_check,
    alpha,
    alpha_inverse,
    balanced_ternary_value,
    balanced_ternary_word,
    lemma_transitive_check,
    phi,
    phi_inverse,
    preperiod_growth,
    wreath_automaton,
    wreath_table_check,
)
from mealy.ratfunc import one_over_one_minus_t, t_over_one_minus_t, RationalSeries, Poly
from mealy.words import EventuallyPeriodicWord as EPW


def test_phi_bijection_small_levels():
    for n in range(1, 9):
        for x in "abc":
            seen = set()
            for bits in iproduct("ud", repeat=n):
                w = "".join(bits)
                img = phi(x, w)
                assert len(img) == n
                assert phi_inverse(x, img) == w
                seen.add(img)
            assert len(seen) == 2**n


def test_phi_images_are_reduced_words_avoiding_x():
    # states walk the two-letter-out-of-three pattern: no repeats, never x first
    for x in "abc":
        for bits in iproduct("ud", repeat=6):
            img = phi(x, "".join(bits))
            assert img[0] != x
            assert all(img[i] != img[i + 1] for i in range(5))


def test_phi_prefix_compatible():
    w = "ududdu"
    for x in "abc":
        full = phi(x, w)
        for k in range(len(w)):
            assert phi(x, w[:k]) == full[:k]


def test_wreath_automaton_table():
    W = wreath_automaton()
    assert W.states == SIX
    assert W.alphabet == ("u", "d")
    # spot rows against the recursion table
    eps, up, down = WREATH_TABLE["b1b"]
    assert W.step("b1b", "u") == (("d" if eps else "u"), up)
    assert W.step("b1b", "d") == (("u" if eps else "d"), down)


def test_wreath_table_check_passes():
    r = wreath_table_check(9)
    assert bool(r)
    assert r.failures == []
    assert r.section_ok


def test_six_series_pinned():
    F = F_solution()
    geo = one_over_one_minus_t(2)
    tge = t_over_one_minus_t(2)
    zero = RationalSeries(Poly([0], 2), Poly([1], 2))
    one = RationalSeries(Poly([1], 2), Poly([1], 2))
    assert F["b1b"] == geo
    assert F["c1a"] == geo
    assert F["a0c"] == zero
    assert F["a1c"] == one
    assert F["b0a"] == tge
    assert F["c0b"] == tge


def test_six_series_coefficients():
    F = F_solution()
    assert F["b1b"].coefficients(6) == [1, 1, 1, 1, 1, 1]
    assert F["b0a"].coefficients(6) == [0, 1, 1, 1, 1, 1]
    assert F["a1c"].coefficients(6) == [1, 0, 0, 0, 0, 0]


def test_lemma_transitive_small_levels():
    for n in range(0, 12):
        assert lemma_transitive_check(n)


def test_dual_action_preserves_reduced_form():
    # the dual of bellaterra maps reduced state words to reduced state words
    B = builtin("bellaterra")
    w = "abacab"
    img = dual_act(B, w, "1")
    assert all(img[i] != img[i + 1] for i in range(len(img) - 1))


def test_aleshin_relation_report():
    r = aleshin_relation_check(9)
    assert r.holds and r.even_path_ok
    assert r.counterexample is None
    # the pairing matches states by name
    assert r.pairing == {"a": "a", "b": "b", "c": "c"}


def test_balanced_ternary_integer_values():
    assert balanced_ternary_value(EPW("b", "c")) == 1
    assert balanced_ternary_value(EPW("a", "c")) == -1
    assert balanced_ternary_value(EPW("bb", "c")) == 4  # 1 + 3
    assert balanced_ternary_value(EPW("ab", "c")) == 2  # -1 + 3
    assert balanced_ternary_value(EPW.constant("c")) == 0


def test_balanced_ternary_periodic_tail():
    assert balanced_ternary_value(EPW("", "b")) == Fraction(-1, 2)
    assert balanced_ternary_word(Fraction(-1, 2)) == EPW("", "b")


def test_balanced_ternary_rejects_denominator_multiple_of_3():
    with pytest.raises(ValueError):
        balanced_ternary_word(Fraction(1, 3))


@given(st.integers(min_value=-3**8, max_value=3**8))
def test_balanced_ternary_integer_roundtrip(v):
    w = balanced_ternary_word(Fraction(v))
    assert balanced_ternary_value(w) == v


@given(st.integers(min_value=-200, max_value=200),
       st.integers(min_value=1, max_value=50).filter(lambda d: d % 3 != 0))
def test_balanced_ternary_rational_roundtrip(num, den):
    v = Fraction(num, den)
    assert balanced_ternary_value(balanced_ternary_word(v)) == v


@given(st.integers(min_value=-100, max_value=100),
       st.integers(min_value=1, max_value=30).filter(lambda d: d % 3 != 0))
def test_alpha_halves_shifted_value(num, den):
    v = Fraction(num, den)
    w = balanced_ternary_word(v)
    assert balanced_ternary_value(alpha(w)) == (v - 1) / 2
    assert balanced_ternary_value(alpha_inverse(w)) == 2 * v + 1


def test_alpha_inverse_inverts():
    w = balanced_ternary_word(Fraction(7, 5))
    assert alpha(alpha_inverse(w)) == w


def test_preperiod_growth_quick():
    rep = preperiod_growth(300, 500)
    assert 0.55 <= rep.slope <= 0.72
    assert rep.adding_ok
    assert rep.adding_max_h <= 11  # ceil(log2(501)) + 2
    assert len(rep.heights) == 300  # one entry per n = 1..n_max


def test_preperiod_heights_start():
    rep = preperiod_growth(8, 10)
    # alpha^{-n}(0) codes 2^n - 1, whose preperiod stays within n + 1 digits
    assert rep.heights[0] == 1  # alpha^{-1} codes 1 = b(c)*
    assert all(h <= n + 1 for n, h in enumerate(rep.heights, start=1))
