import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mealy.automaton import act, builtin
from mealy.levels import (
    LEVEL_CAP,
    all_level_maps,
    has_spanning_orbit,
    index_word,
    invert_perm,
    is_single_cycle,
    level_maps,
    level_permutation,
    word_index,
)

B = builtin("bellaterra")
A = builtin("aleshin")


def test_word_index_is_lsd_first():
    # first letter is the least significant digit
    assert word_index(B, "10") == 1
    assert word_index(B, "01") == 2
    assert word_index(B, "111") == 7


@given(st.integers(min_value=0, max_value=255))
def test_index_word_roundtrip(v):
    assert word_index(B, index_word(B, v, 8)) == v


def test_level_maps_agree_with_act():
    n = 6
    P = level_maps(B, n)
    for qi, q in enumerate(B.states):
        for v in range(0, 2**n, 7):
            w = index_word(B, v, n)
            assert index_word(B, int(P[qi][v]), n) == tuple(act(B, q, w))


def test_level_maps_are_permutations():
    P = level_maps(A, 7)
    for row in P:
        assert np.array_equal(np.sort(row), np.arange(2**7))


def test_all_level_maps_prefix_consistency():
    ms = all_level_maps(B, 5)  # levels 0..5
    assert [m.shape[1] for m in ms] == [1, 2, 4, 8, 16, 32]
    # image of a prefix is the prefix of the image: P_{k+1}(v) mod 2^k = P_k(v mod 2^k)
    for k in range(5):
        v = np.arange(2 ** (k + 1))
        for qi in range(3):
            assert np.array_equal(ms[k + 1][qi][v] % 2**k, ms[k][qi][v % 2**k])


def test_invert_perm():
    p = np.array([2, 0, 1])
    assert np.array_equal(invert_perm(p)[p], np.arange(3))


def test_level_permutation_composes():
    n = 6
    pa = level_permutation(A, "a", n)
    pb = level_permutation(A, "b", n)
    # rightmost acts first: word ab is a after b
    assert np.array_equal(level_permutation(A, "ab", n), pa[pb])


def test_level_permutation_primed():
    n = 5
    pc = level_permutation(B, "c", n)
    assert np.array_equal(level_permutation(B, "c'", n), invert_perm(pc))


def test_is_single_cycle():
    assert is_single_cycle(np.array([1, 2, 0]))
    assert not is_single_cycle(np.array([1, 0, 2]))
    assert is_single_cycle(np.array([0]))


def test_adding_machine_is_a_full_cycle_every_level():
    ADD = builtin("adding")
    for n in range(1, 9):
        assert is_single_cycle(level_permutation(ADD, "r", n))


def test_has_spanning_orbit():
    assert has_spanning_orbit(np.array([1, 2, 3, 0]))  # 4-cycle
    assert not has_spanning_orbit(np.array([1, 0, 3, 2]))  # two 2-cycles
    # non-bijective: tail 0 -> 1 feeding the cycle 1 -> 2 -> 3 -> 1
    assert has_spanning_orbit(np.array([1, 2, 3, 1]))
    assert not has_spanning_orbit(np.array([0, 0, 3, 3]))  # two points missing


def test_cap_guard():
    with pytest.raises(MemoryError):
        level_maps(B, 30, cap=1 << 10)
