"""End-to-end checks, one test per advertised result.

Each test re-derives its expected values from an independent route
(big-integer arithmetic, brute-force search, a second formula) rather
than trusting the code path under test.  Budgets follow the documented
runtime targets; nothing here depends on cached state.
"""

import random
from itertools import product as iproduct
from math import ceil, log2

import numpy as np

from mealy.automaton import act, act_inf, builtin, dual, properties
from mealy.bellaterra import (
    F_solution,
    lemma_transitive_check,
    preperiod_growth,
)
from mealy.classify import classify_cotransitive, conjugation_decide, enumerate_classes
from mealy.levels import invert_perm, is_single_cycle, level_maps, level_permutation
from mealy.ratfunc import Poly, RationalSeries
from mealy.schreier import build, diameter, find_level_witness, first_divergence, steer_to
from mealy.spectral import two_sided_gap
from mealy.transitivity import char_coeffs, char_rational, orbit_cycle, stabilizes_infinite
from mealy.words import EventuallyPeriodicWord, GroupWord

B = builtin("bellaterra")
A = builtin("aleshin")


def test_criterion_01_bellaterra_action():
    assert act(B, "c", "0000") == "1001"


def test_criterion_02_bireversibility():
    assert properties(B).bireversible
    assert properties(A).bireversible


def test_criterion_03_involutions_and_free_words():
    n = 12
    ident = np.arange(2**n)
    for q in B.states:
        p = level_permutation(B, q, n)
        assert np.array_equal(p[p], ident), f"{q}^2 is not the identity on level {n}"

    # every freely reduced word of length <= 6 in the Aleshin states and
    # their inverses moves some length-12 word
    perms = {}
    for q in A.states:
        p = level_permutation(A, q, n)
        perms[q] = p
        perms[q + "'"] = invert_perm(p)
    inverse_of = {q: q + "'" for q in A.states} | {q + "'": q for q in A.states}
    trivial = []
    seen = 0

    def extend(word, perm, depth):
        nonlocal seen
        seen += 1
        if np.array_equal(perm, ident):
            trivial.append("".join(word))
        if depth == 6:
            return
        for g in perms:
            if inverse_of[g] != word[0]:
                extend((g,) + word, perms[g][perm], depth + 1)

    for g in perms:
        extend((g,), perms[g].copy(), 1)
    assert seen == sum(6 * 5 ** (k - 1) for k in range(1, 7))
    assert trivial == [], f"trivial reduced words found: {trivial[:5]}"


def test_criterion_04_lift_fidelity():
    from mealy.schreier import verify_lift

    expected = {
        "bellaterra": {"a": (("c", "c"), True), "b": (("a", "b"), False), "c": (("b", "a"), False)},
        "aleshin": {"a": (("c", "c"), False), "b": (("a", "b"), True), "c": (("b", "a"), True)},
    }
    for name, rules in expected.items():
        r = verify_lift(builtin(name), 10)
        assert r.ok, f"{name}: {r.counterexample}"
        assert r.max_level >= 10
        assert r.rules == rules


def test_criterion_05_characteristic_series():
    geo = RationalSeries(Poly([1], 2), Poly([1, 1], 2))  # 1/(1 - t) over Z_2
    assert char_rational(builtin("adding"), "r") == geo

    F = F_solution(direct_levels=12, n_coeffs=64)  # raises if either cross-check fails
    t_geo = RationalSeries(Poly([0, 1], 2), Poly([1, 1], 2))
    assert F["a0c"] == RationalSeries.const(0, 2)
    assert F["a1c"] == RationalSeries.const(1, 2)
    assert F["b0a"] == t_geo
    assert F["b1b"] == geo
    assert F["c0b"] == t_geo
    assert F["c1a"] == geo


def test_criterion_06_dual_bellaterra_transitivity():
    for n in range(1, 15):
        assert lemma_transitive_check(n), f"dual orbit splits at length {n}"


def test_criterion_07_diameters_witnesses_steering():
    expected = {
        "bellaterra": [1, 2, 3, 4, 5, 8, 9, 10, 12, 12, 14],
        "aleshin": [1, 1, 2, 2, 3, 4, 4, 5, 6, 6, 7],
    }
    for name, pins in expected.items():
        M = builtin(name)
        for n in range(1, 12):
            d = diameter(build(M, n))
            assert d == pins[n - 1]
            assert d <= 2 * n * n

    for M in (B, A):
        for x in M.alphabet:
            for n in range(1, 15):
                u = find_level_witness(M, x, n, budget=n)
                assert len(u) <= 2 * n
                assert act(M, u, x * n) == x * n
                fd = first_divergence(M, u, x)
                assert fd is not None and fd >= n

    for M in (A, B):
        for bits in iproduct("01", repeat=10):
            v = "".join(bits)
            w = steer_to(M, "0", v)
            assert act(M, w, v) == "0" * 10
            assert len(w) <= 100


def test_criterion_08_spectral_gap_bands():
    for n in range(8, 13):
        ga = two_sided_gap(build(A, n))
        gb = two_sided_gap(build(B, n))
        assert 0.10 <= ga <= 0.40, f"aleshin gap {ga:.4f} at n={n}"
        assert 0.01 <= gb <= 0.12, f"bellaterra gap {gb:.4f} at n={n}"
        assert ga > gb, f"ordering fails at n={n}: {ga:.4f} vs {gb:.4f}"


def test_criterion_09_division_arithmetic_and_gap_decay():
    D = builtin("div3")

    # forward action: x -> (x - q) / 3 over the 2-adics, checked against
    # modular big-integer arithmetic on every length-n word
    for n in range(1, 17):
        size = 2**n
        inv3 = pow(3, -1, size)
        v = np.arange(size, dtype=np.int64)
        ms = level_maps(D, n)
        for qi, q in enumerate(D.states):
            want = ((v - int(q)) * inv3) % size
            assert np.array_equal(ms[qi], want), f"sigma_{q} wrong at n={n}"

    # dual action: v -> (v - x) / 2 over the 3-adics
    dD = dual(D)
    for m in range(1, 11):
        size = 3**m
        inv2 = pow(2, -1, size)
        v = np.arange(size, dtype=np.int64)
        ms = level_maps(dD, m)
        for xi, x in enumerate(dD.states):
            want = ((v - int(x)) * inv2) % size
            assert np.array_equal(ms[xi], want), f"tau_{x} wrong at m={m}"

    # the orbit of the digit word of 1 under state 0 closes after 2 * 3^(m-1)
    for m in range(1, 11):
        word = "0" * (m - 1) + "1"
        assert orbit_cycle(D, "0", word) == (0, 2 * 3 ** (m - 1))

    series = [two_sided_gap(build(D, n)) for n in range(6, 13)]
    assert all(a > b for a, b in zip(series, series[1:])), f"not decreasing: {series}"
    assert series[-1] < 0.05, (
        f"gap at n=12 is {series[-1]:.6f}, not below 0.05; "
        f"measured series n=6..12: {[round(g, 6) for g in series]}"
    )


def test_criterion_10_classification_census():
    r32 = classify_cotransitive(3, 2, level_budget=4)
    assert r32.cotransitive_yes == 5
    assert r32.cotransitive_unknown == 0
    assert sum(1 for w in r32.witnesses if w["cocyclic"]) == 4

    survivors = [w for w in r32.witnesses if not w["cocyclic"]]
    assert len(survivors) == 1
    assert survivors[0]["decided_by"] == "conjugation"
    reps = {M.name: M for M in enumerate_classes(3, 2)}
    info = conjugation_decide(reps[survivors[0]["name"]])
    assert info is not None
    coeffs = char_coeffs(info["automaton"], info["state"], 48)
    assert all(c % 3 != 0 for c in coeffs), "chi has a zero coefficient"

    r42 = classify_cotransitive(4, 2, level_budget=4)
    assert r42.cotransitive_yes == 0
    assert r42.cotransitive_unknown == 0
    assert all(lvl <= 4 for lvl in r42.refutation_levels)


def test_criterion_11_five_state_candidate():
    M = builtin("bireversible52")
    p = properties(M)
    assert p.bireversible
    assert not p.cocyclic
    D = dual(M)
    xi = D.states.index("0")
    for n in range(1, 11):
        assert is_single_cycle(level_maps(D, n)[xi]), f"orbit splits on Q^{n}"


def test_criterion_12_stabilizer_equivalence():
    rng = random.Random(20260819)
    names = ("adding", "aleshin", "bellaterra", "bireversible52", "conjugator", "div3")
    for _ in range(10_000):
        M = builtin(rng.choice(names))
        k = rng.randint(1, 8)
        w = GroupWord([(rng.choice(M.states), rng.choice((1, -1))) for _ in range(k)])
        x = rng.choice(M.alphabet)
        tail = EventuallyPeriodicWord.constant(x)
        assert stabilizes_infinite(M, w, x) == (act_inf(M, w, tail) == tail)


def test_criterion_13_preperiod_growth():
    rep = preperiod_growth(2000, 10_000)
    assert 0.57 <= rep.slope <= 0.70, f"slope {rep.slope:.5f}"
    assert rep.adding_ok
    assert rep.adding_max_h <= ceil(log2(10_001)) + 2
