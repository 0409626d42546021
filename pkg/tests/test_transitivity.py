import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mealy.automaton import act_inf, builtin, dual
from mealy.levels import is_single_cycle, level_permutation
from mealy.ratfunc import Poly, RationalSeries, one_over_one_minus_t
from mealy.transitivity import (
    char_coeffs,
    char_rational,
    cotransitivity,
    dual_state_spans_level,
    first_intransitive_level,
    is_transitive_exact,
    orbit_cycle,
    orbits_on_level,
    stabilizes_infinite,
)
from mealy.words import EventuallyPeriodicWord

ADD = builtin("adding")
B = builtin("bellaterra")
A = builtin("aleshin")
DIV = builtin("div3")


def test_adding_machine_chi_is_geometric():
    assert char_coeffs(ADD, "r", 12) == [1] * 12
    assert char_rational(ADD, "r") == one_over_one_minus_t(2)


def test_identity_state_chi_vanishes():
    assert char_coeffs(ADD, "i", 6) == [0] * 6
    assert char_rational(ADD, "i") == RationalSeries(Poly([0], 2), Poly([1], 2))


def test_chi_rational_matches_direct_coefficients():
    # exact rational form against the direct recurrence, far past any period
    N = 200
    for M, q in ((ADD, "r"), (DIV, "0"), (DIV, "1"), (DIV, "2"), (B, "a"), (A, "c")):
        assert char_rational(M, q).coefficients(N) == char_coeffs(M, q, N), (M.name, q)


def test_transitive_iff_coefficients_are_units():
    assert is_transitive_exact(ADD, "r")
    assert not is_transitive_exact(ADD, "i")
    assert first_intransitive_level(ADD, "i") == 1
    assert first_intransitive_level(ADD, "r") is None


def test_transitivity_matches_single_cycle_per_level():
    for M, q in ((ADD, "r"), (DIV, "1"), (B, "c")):
        expected = is_transitive_exact(M, q)
        for n in range(1, 9):
            got = is_single_cycle(level_permutation(M, q, n))
            if not got:
                assert not expected
                assert first_intransitive_level(M, q) <= n
                break
        else:
            lvl = first_intransitive_level(M, q)
            assert expected or lvl > 8


def test_div3_states_transitivity():
    # affine maps (x - q) * 3^{-1}: the multiplier is 3 mod 4, so no state
    # is spherically transitive; failure levels pinned
    assert first_intransitive_level(DIV, "0") == 1  # fixes 0
    assert first_intransitive_level(DIV, "1") == 2
    assert first_intransitive_level(DIV, "2") == 1
    assert not any(is_transitive_exact(DIV, q) for q in DIV.states)


def test_orbits_on_level_partition():
    rep = orbits_on_level(A, "a", 6)
    assert sum(rep.sizes) == rep.domain_size == 64
    assert rep.transitive == (len(rep.sizes) == 1)


def test_orbits_on_level_with_subset():
    # parity of bit sums is preserved by the adding machine square
    rep = orbits_on_level(ADD, "rr", 4)
    assert sorted(rep.sizes) == [8, 8]


def test_cotransitivity_verdicts_pinned():
    v = cotransitivity(B, 4)
    assert v.kind == "no" and v.level == 2
    assert cotransitivity(DIV, 4).kind == "no"
    assert cotransitivity(DIV, 4).level == 1
    va = cotransitivity(A, 4)
    assert va.kind == "no" and va.level == 4
    assert cotransitivity(ADD, 4).kind == "no"


def test_cotransitivity_yes_on_cocyclic():
    # dual of the adding machine read as is: use a machine whose dual is cyclic
    C = builtin("conjugator")
    vd = cotransitivity(dual(C), 4)
    assert vd.kind in ("yes", "no")  # exact either way since C is cyclic
    assert vd.evidence.get("exact") is True


def test_cotransitivity_unknown_survivor():
    v = cotransitivity(builtin("bireversible52"), 4)
    assert v.kind == "unknown"
    assert v.evidence["surviving_states"]


def test_dual_state_spans_level_agrees_with_dual_perms():
    for x in ("0", "1"):
        for n in range(1, 6):
            got = dual_state_spans_level(B, x, n)
            want = is_single_cycle(level_permutation(dual(B), x, n))
            assert got == want


def test_stabilizes_infinite_examples():
    assert stabilizes_infinite(B, "cc", "0")
    assert not stabilizes_infinite(ADD, "r", "0")
    assert stabilizes_infinite(ADD, "rr'", "1")


@settings(deadline=None)
@given(st.text(alphabet="abc", min_size=1, max_size=5), st.sampled_from(["0", "1"]))
def test_stabilizes_infinite_matches_act_inf(w, x):
    stream = EventuallyPeriodicWord.constant(x)
    assert stabilizes_infinite(B, w, x) == (act_inf(B, w, stream) == stream)


def test_orbit_cycle_reversible_has_no_preperiod():
    pre, per = orbit_cycle(DIV, "0", "0001")
    assert pre == 0
    assert per == 2 * 3**3


def test_orbit_cycle_identity_word():
    pre, per = orbit_cycle(ADD, "0", "ii")
    assert (pre, per) == (0, 1)


def test_chi_requires_cyclic():
    # bireversible52 is cyclic so chi applies; a non-cyclic machine must refuse
    from mealy.automaton import Automaton
    M = Automaton(["p", "q"], ["0", "1"],
                  {("p", "0"): "p", ("p", "1"): "q", ("q", "0"): "q", ("q", "1"): "p"},
                  {("p", "0"): "0", ("p", "1"): "1", ("q", "0"): "0", ("q", "1"): "1"})
    with pytest.raises(ValueError):
        char_coeffs(M, "p", 4)
