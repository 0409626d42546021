"""Orbits and spherical transitivity.

For a cyclic automaton (output permutations generating the group of one full
|A|-cycle rho) the action of a state q on the levels of the tree is measured
by its characteristic series chi(q) over Z_m, m = |A|:

    chi(q) = k_q + t * sum_x chi(q^x),      sigma_q = rho^{k_q}.

sigma_q acts transitively on every level iff every coefficient of chi(q)
generates Z_m.  Coefficients obey the linear recursion c_{n+1} = T c_n with
T[q][r] = #{x : q^x = r}, so the decision is exact: the coefficient vector
trajectory is eventually periodic inside Z_m^{|Q|}.
"""

from __future__ import annotations

from math import gcd
from typing import Callable, Sequence

import numpy as np

from .automaton import Automaton, dual, dual_act, group_section, act
from .levels import (
    LEVEL_CAP,
    has_spanning_orbit,
    index_word,
    level_maps,
    level_permutation,
    word_index,
)
from .ratfunc import Poly, RationalSeries, solve_linear
from .words import GroupWord

# -- orbits on a level -------------------------------------------------------


class OrbitReport:
    """Orbit decomposition of <w> on level n (or on a designated subset)."""

    __slots__ = ("level", "sizes", "rep_indices", "transitive", "domain_size", "alphabet")

    def __init__(self, level, sizes, rep_indices, transitive, domain_size, alphabet):
        self.level = level
        self.sizes = sizes
        self.rep_indices = rep_indices
        self.transitive = transitive
        self.domain_size = domain_size
        self.alphabet = alphabet

    def orbit_count(self) -> int:
        return len(self.sizes)

    def max_orbit(self) -> int:
        return max(self.sizes) if self.sizes else 0

    def representatives(self) -> list[tuple[str, ...]]:
        a = len(self.alphabet)
        out = []
        for v in self.rep_indices:
            v = int(v)
            word = []
            for _ in range(self.level):
                word.append(self.alphabet[v % a])
                v //= a
            out.append(tuple(word))
        return out

    def csv_row(self) -> str:
        return f"{self.level},{self.orbit_count()},{self.max_orbit()},{str(self.transitive).lower()}"

    def __repr__(self) -> str:
        return (
            f"OrbitReport(level={self.level}, orbits={self.orbit_count()}, "
            f"max={self.max_orbit()}, transitive={self.transitive})"
        )


def orbits_on_level(
    M: Automaton,
    w,
    n: int,
    subset: Callable[[tuple[str, ...]], bool] | None = None,
    cap: int = LEVEL_CAP,
) -> OrbitReport:
    """Exact orbit decomposition of the group word w acting on level n.

    With a subset predicate, orbits are the permutation cycles through the
    subset's members; the caller is responsible for picking an invariant
    subset (a cycle that leaves the subset is still reported in full, and
    transitivity then fails).
    """
    perm = level_permutation(M, w, n, cap=cap)
    size = len(perm)
    if subset is None:
        members = None
    else:
        members = np.fromiter(
            (subset(index_word(M, v, n)) for v in range(size)), dtype=bool, count=size
        )
    visited = np.zeros(size, dtype=bool)
    sizes: list[int] = []
    reps: list[int] = []
    in_domain = 0
    covered = 0
    domain = range(size) if members is None else np.flatnonzero(members)
    if members is not None:
        in_domain = len(domain)
    else:
        in_domain = size
    for start in domain:
        start = int(start)
        if visited[start]:
            continue
        length = 0
        v = start
        inside = 0
        while not visited[v]:
            visited[v] = True
            if members is None or members[v]:
                inside += 1
            v = int(perm[v])
            length += 1
        sizes.append(length)
        reps.append(start)
        covered += inside
    transitive = len(sizes) == 1 and sizes[0] == in_domain and covered == in_domain
    sizes.sort(reverse=True)
    return OrbitReport(n, sizes, np.asarray(reps), transitive, in_domain, M.alphabet)


def reduced_word(word: Sequence[str]) -> bool:
    """No two adjacent equal symbols."""
    return all(word[i] != word[i + 1] for i in range(len(word) - 1))


def reduced_ending_in(allowed: Sequence[str]) -> Callable[[tuple[str, ...]], bool]:
    allowed_set = frozenset(allowed)
    def pred(word: tuple[str, ...]) -> bool:
        return bool(word) and reduced_word(word) and word[-1] in allowed_set
    return pred


def reduced_beginning_in(allowed: Sequence[str]) -> Callable[[tuple[str, ...]], bool]:
    allowed_set = frozenset(allowed)
    def pred(word: tuple[str, ...]) -> bool:
        return bool(word) and reduced_word(word) and word[0] in allowed_set
    return pred


# -- characteristic series ---------------------------------------------------


class SeriesState:
    """Coefficient-vector recursion for chi over Z_m.

    coeffs[q] is the current coefficient c_n(chi(q)); step is n.  advance()
    applies the linear map T once.
    """

    __slots__ = ("modulus", "coeffs", "step", "_T")

    def __init__(self, modulus: int, coeffs: np.ndarray, T: np.ndarray, step: int = 1):
        self.modulus = modulus
        self.coeffs = coeffs
        self.step = step
        self._T = T

    def advance(self) -> None:
        self.coeffs = (self._T @ self.coeffs) % self.modulus
        self.step += 1


def _reference_cycle(M: Automaton) -> tuple[np.ndarray, dict[bytes, int]]:
    """The lexicographically least full |A|-cycle in <sigma_q>, with the
    exponent table mapping each sigma_q-realizable permutation to k."""
    m = M.n_letters
    perms = {tuple(int(v) for v in M.o[q]) for q in range(M.n_states)}
    # close under composition to get the whole (cyclic) group
    group = {tuple(range(m))}
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = tuple(p[g[i]] for i in range(m))
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    full_cycles = sorted(g for g in group if _full_cycle(g))
    if not full_cycles:
        raise ValueError("not a cyclic automaton: no full cycle among the outputs")
    rho = full_cycles[0]
    table: dict[bytes, int] = {}
    cur = tuple(range(m))
    for k in range(len(group)):
        table[bytes(cur)] = k
        cur = tuple(rho[cur[i]] for i in range(m))
    return np.asarray(rho), table


def _full_cycle(perm: tuple[int, ...]) -> bool:
    v, n = 0, len(perm)
    for count in range(1, n + 1):
        v = perm[v]
        if v == 0:
            return count == n
    return False


def _exponents(M: Automaton) -> np.ndarray:
    """k_q for every state, with sigma_q = rho^{k_q}."""
    _, table = _reference_cycle(M)
    ks = []
    for q in range(M.n_states):
        key = bytes(tuple(int(v) for v in M.o[q]))
        if key not in table:
            raise ValueError("not a cyclic automaton: output outside <rho>")
        ks.append(table[key])
    return np.asarray(ks, dtype=np.int64)


def _require_cyclic(M: Automaton) -> None:
    from .automaton import _is_cyclic

    if not _is_cyclic(M):
        raise ValueError("characteristic series needs a cyclic automaton")


def _transition_count_matrix(M: Automaton) -> np.ndarray:
    nq = M.n_states
    T = np.zeros((nq, nq), dtype=np.int64)
    for q in range(nq):
        for x in range(M.n_letters):
            T[q, int(M.t[q, x])] += 1
    return T


def char_coeffs(M: Automaton, q: str, N: int) -> list[int]:
    """First N coefficients of chi(q) over Z_m, m = |A|."""
    _require_cyclic(M)
    m = M.n_letters
    if m == 1:
        return [0] * N
    k = _exponents(M) % m
    T = _transition_count_matrix(M)
    qi = M.state_index(q)
    state = SeriesState(m, k.copy(), T)
    out = []
    for _ in range(N):
        out.append(int(state.coeffs[qi]))
        state.advance()
    return out


def char_rational(M: Automaton, q: str) -> RationalSeries:
    """chi(q) as an exact rational function over Z_p(t), |A| = p prime.

    Solves (I - tT) chi = k by Gaussian elimination over the fraction field.
    """
    _require_cyclic(M)
    p = M.n_letters
    if not _is_prime(p):
        raise ValueError(f"alphabet size {p} is not prime; use char_coeffs")
    k = _exponents(M) % p
    T = _transition_count_matrix(M) % p
    nq = M.n_states
    A = [
        [
            RationalSeries(
                Poly([1 if i == j else 0, -int(T[i, j])], p), Poly([1], p)
            )
            for j in range(nq)
        ]
        for i in range(nq)
    ]
    b = [RationalSeries(Poly([int(k[i])], p), Poly([1], p)) for i in range(nq)]
    sol = solve_linear(A, b)
    return sol[M.state_index(q)]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def is_transitive_exact(M: Automaton, q: str) -> bool:
    """Exact spherical-transitivity decision for state q of a cyclic automaton.

    Walks the coefficient-vector trajectory to its cycle (the state space
    Z_m^{|Q|} is finite) and demands gcd(c_n(q), m) = 1 throughout, with
    early exit on the first non-generator coefficient.
    """
    _require_cyclic(M)
    m = M.n_letters
    if m == 1:
        return True
    k = _exponents(M) % m
    T = _transition_count_matrix(M)
    qi = M.state_index(q)
    seen: set[bytes] = set()
    vec = k.copy()
    while True:
        key = vec.tobytes()
        if key in seen:
            return True
        seen.add(key)
        if gcd(int(vec[qi]), m) != 1:
            return False
        vec = (T @ vec) % m


def first_intransitive_level(M: Automaton, q: str, max_level: int | None = None) -> int | None:
    """Index of the first non-generator coefficient of chi(q), or None.

    The action of q is transitive on level n iff c_1..c_n all generate Z_m,
    so this is also the first level where transitivity fails.
    """
    _require_cyclic(M)
    m = M.n_letters
    if m == 1:
        return None
    k = _exponents(M) % m
    T = _transition_count_matrix(M)
    qi = M.state_index(q)
    seen: set[bytes] = set()
    vec = k.copy()
    n = 1
    while True:
        if gcd(int(vec[qi]), m) != 1:
            return n
        key = vec.tobytes()
        if key in seen:
            return None
        seen.add(key)
        if max_level is not None and n >= max_level:
            return None
        vec = (T @ vec) % m
        n += 1


# -- cotransitivity -----------------------------------------------------------


class Verdict:
    """Outcome of a cotransitivity check: yes / no / unknown plus evidence."""

    __slots__ = ("kind", "witness", "level", "evidence")

    def __init__(self, kind: str, witness: str | None = None, level: int | None = None, evidence=None):
        assert kind in ("yes", "no", "unknown")
        self.kind = kind
        self.witness = witness
        self.level = level
        self.evidence = evidence or {}

    def __bool__(self) -> bool:
        return self.kind == "yes"

    def __repr__(self) -> str:
        extra = ""
        if self.witness is not None:
            extra = f", witness={self.witness}"
        if self.level is not None:
            extra += f", level={self.level}"
        return f"Verdict({self.kind}{extra})"


def dual_state_spans_level(M: Automaton, x: str, n: int) -> bool:
    """Whether the dual state x has a forward orbit covering Q^n.

    Works whether or not the dual action is invertible: a non-bijective
    level map can only span through a single tail into its cycle.
    """
    D = dual(M)
    F = level_maps(D, n)[D.state_index(x)]
    return has_spanning_orbit(F)


def cotransitivity(M: Automaton, level_budget: int = 4) -> Verdict:
    """Decide whether some dual state acts spherically transitively.

    Exact when M is cocyclic (characteristic-series criterion on the dual);
    otherwise levels 1..budget are searched for refutations of every dual
    state, and the verdict is unknown if some state survives.
    """
    if not M.is_invertible():
        raise ValueError("cotransitivity assumes an invertible automaton")
    D = dual(M)
    from .automaton import _is_cyclic

    if _is_cyclic(D):
        evidence = {}
        for x in D.states:
            if is_transitive_exact(D, x):
                return Verdict("yes", witness=x, evidence={"exact": True})
            evidence[x] = first_intransitive_level(D, x)
        level = max(evidence.values())
        return Verdict("no", level=level, evidence={"first_bad_level": evidence, "exact": True})
    evidence = {}
    alive = list(D.states)
    for n in range(1, level_budget + 1):
        still = []
        for x in alive:
            if dual_state_spans_level(M, x, n):
                still.append(x)
            else:
                evidence[x] = n
        alive = still
        if not alive:
            return Verdict("no", level=n, evidence={"first_bad_level": evidence, "exact": False})
    return Verdict(
        "unknown",
        level=level_budget,
        evidence={"surviving_states": alive, "first_bad_level": evidence},
    )


# -- stabilization of x^infinity ----------------------------------------------


def stabilizes_infinite(M: Automaton, w, x: str) -> bool:
    """Whether the group word w fixes the infinite word x x x ...

    Criterion: every word in the orbit of w under sectioning at x sends the
    letter x to x.  The orbit lives in a finite set (sections never grow),
    so plain cycle detection terminates.
    """
    M.letter_index(x)
    cur = GroupWord.of(w)
    seen: set[tuple] = set()
    while cur.letters not in seen:
        seen.add(cur.letters)
        img = act(M, cur, (x,))
        if img[0] != x:
            return False
        cur = group_section(M, cur, (x,))
    return True


# -- orbit period under the dual action ---------------------------------------


def orbit_cycle(M: Automaton, x: str, v) -> tuple[int, int]:
    """(preperiod, period) of the state word v under repeated tau_x.

    Brent's cycle detection; for reversible automata the preperiod is 0 and
    the period is the orbit size.
    """
    start = tuple(v) if not isinstance(v, str) else tuple(v)
    if len(start) == 0:
        return (0, 1)

    def f(word: tuple[str, ...]) -> tuple[str, ...]:
        out = dual_act(M, word, (x,))
        return tuple(out)

    # Brent: find the period first, then the preperiod
    power, period = 1, 1
    tortoise = start
    hare = f(start)
    while tortoise != hare:
        if power == period:
            tortoise = hare
            power *= 2
            period = 0
        hare = f(hare)
        period += 1
    tortoise = hare = start
    for _ in range(period):
        hare = f(hare)
    preperiod = 0
    while tortoise != hare:
        tortoise = f(tortoise)
        hare = f(hare)
        preperiod += 1
    return (preperiod, period)
