"""Schreier graphs of automaton actions, diameters, balls, and steering.

The level-n Schreier graph of an invertible automaton has vertex set A^n
(indexed with the first-read letter least significant) and one edge
s -> act(q, s) per state q.  Distances are undirected.  The witness and
steering routines replay the constructive quadratic-diameter argument:
group words that fix x^n but move x^{n+B} are found by a pigeonhole search,
sectioned down to cycle a single level, and stacked to steer any vertex to
x^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .automaton import Automaton, act, act_inf, group_section, _signed_letters, _step_signed
from .levels import LEVEL_CAP, invert_perm, level_maps
from .words import EventuallyPeriodicWord, GroupWord

EXACT_DIAMETER_CAP = 1 << 14


@dataclass
class ExperimentConfig:
    """Reporting parameters for growth experiments."""

    radius: int = 8
    depth: int | None = None  # default 2 * radius
    witness_budget: int = 16
    growth_K: float = 2.0
    growth_alpha: float = 1.0
    seed: int = 0


class SchreierGraph:
    """Explicit level-n action graph of an invertible automaton."""

    __slots__ = ("M", "n", "n_vertices", "perms")

    def __init__(self, M: Automaton, n: int, perms: np.ndarray):
        self.M = M
        self.n = n
        self.n_vertices = perms.shape[1] if perms.ndim == 2 else 1
        self.perms = perms

    def __repr__(self) -> str:
        return f"<SchreierGraph n={self.n}, {self.n_vertices} vertices, {len(self.perms)} generators>"


def build(M: Automaton, n: int, cap: int = LEVEL_CAP) -> SchreierGraph:
    """Construct the level-n Schreier graph (per-state permutation arrays)."""
    if not M.is_invertible():
        raise ValueError("Schreier graphs need an invertible automaton")
    P = level_maps(M, n, cap=cap)
    return SchreierGraph(M, n, P)


def _generator_rows(G: SchreierGraph) -> list[np.ndarray]:
    rows = [G.perms[q] for q in range(len(G.perms))]
    rows += [invert_perm(p) for p in rows]
    return rows


def distances(G: SchreierGraph, source: int) -> np.ndarray:
    """BFS distances from a vertex, edges undirected; -1 marks unreachable."""
    nv = G.n_vertices
    if not (0 <= source < nv):
        raise ValueError("source out of range")
    rows = _generator_rows(G)
    dist = np.full(nv, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=G.perms.dtype)
    d = 0
    while len(frontier):
        d += 1
        nxt = np.concatenate([p[frontier] for p in rows])
        nxt = nxt[dist[nxt] < 0]
        if len(nxt) == 0:
            break
        nxt = np.unique(nxt)
        dist[nxt] = d
        frontier = nxt
    return dist


def eccentricity(G: SchreierGraph, source: int) -> int:
    d = distances(G, source)
    if (d < 0).any():
        raise ValueError("graph is disconnected")
    return int(d.max())


def _diameter_dense(G: SchreierGraph) -> int:
    """All-pairs BFS as boolean frontier matrices (one row per source)."""
    nv = G.n_vertices
    rows = _generator_rows(G)
    reached = np.eye(nv, dtype=bool)
    frontier = reached.copy()
    dist = 0
    while True:
        new = np.zeros_like(frontier)
        for p in rows:
            # w adjacent to v via generator map g means w = g(v); gathering
            # columns by p pulls F[s, p[u]] into position (s, u) for g^{-1},
            # and both directions appear since rows holds p and p^{-1}
            new |= frontier[:, p]
        new &= ~reached
        if not new.any():
            break
        dist += 1
        reached |= new
        frontier = new
    if not reached.all():
        raise ValueError("graph is disconnected")
    return dist


def _diameter_loop(G: SchreierGraph) -> int:
    best = 0
    for v in range(G.n_vertices):
        best = max(best, eccentricity(G, v))
    return best


def diameter(G: SchreierGraph, mode: str = "exact", sample: int = 16, seed: int = 0):
    """Exact diameter (all-pairs BFS) or (lower, upper) bounds.

    Bounds: lower = max eccentricity over sampled sources, upper = twice the
    eccentricity of the constant word x^n (vertex 0), by the triangle
    inequality through x^n.
    """
    if mode == "exact":
        if G.n_vertices > EXACT_DIAMETER_CAP:
            raise MemoryError(f"{G.n_vertices} vertices above the exact cap")
        if G.n_vertices <= 4096:
            return _diameter_dense(G)
        return _diameter_loop(G)
    if mode != "bound":
        raise ValueError("mode must be 'exact' or 'bound'")
    ecc0 = eccentricity(G, 0)
    rng = np.random.default_rng(seed)
    nv = G.n_vertices
    sources = {0}
    if nv > 1:
        sources |= {int(v) for v in rng.integers(0, nv, size=min(sample, nv))}
    lower = max(eccentricity(G, v) for v in sources)
    return (lower, 2 * ecc0)


# -- implicit word walks ------------------------------------------------------


def _act_index(M: Automaton, qi: int, sign: int, v: int, n: int) -> int:
    """Image of the index-coded word v (length n) under one signed state."""
    a = M.n_letters
    out = 0
    mult = 1
    cur = qi
    for _ in range(n):
        y, cur = _step_signed(M, cur, sign, v % a)
        out += y * mult
        v //= a
        mult *= a
    return out


def ball_size(M: Automaton, x: str, r: int, L: int | None = None) -> int:
    """Size of the radius-r ball around x^L under all states and inverses.

    The walk is implicit (no graph is materialized); L defaults to 2r.  The
    count is nondecreasing in both r and L and lower-bounds the ball of the
    boundary action around x x x ...
    """
    if L is None:
        L = max(2 * r, 1)
    if not M.is_invertible():
        raise ValueError("ball_size works in the group generated by the states")
    a = M.n_letters
    xi = M.letter_index(x)
    v0 = sum(xi * a**i for i in range(L))
    gens = [(qi, s) for qi in range(M.n_states) for s in (1, -1)]
    seen = {v0}
    frontier = [v0]
    for _ in range(r):
        nxt = []
        for v in frontier:
            for qi, s in gens:
                w = _act_index(M, qi, s, v, L)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return len(seen)


def ball_series(M: Automaton, x: str, r_max: int, L: int | None = None) -> list[tuple[int, int, int]]:
    """(r, L, size) rows for r = 0..r_max."""
    out = []
    for r in range(r_max + 1):
        depth = L if L is not None else max(2 * r, 1)
        out.append((r, depth, ball_size(M, x, r, depth)))
    return out


# -- witnesses and steering ---------------------------------------------------


class WitnessNotFound(Exception):
    def __init__(self, n: int, budget: int):
        super().__init__(f"no witness for level {n} within budget {budget}")
        self.n = n
        self.budget = budget


def find_level_witness(
    M: Automaton, x: str, n: int, budget: int, lookahead: int = 16
) -> GroupWord:
    """A group word u fixing x^n but moving the infinite word x x x ...

    BFS over images of x^{n+B} under generator words of length <= budget.
    Two BFS nodes whose images share the level-n prefix but differ beyond it
    give u = w2^{-1} w1 with |u| <= 2 budget; by the pigeonhole principle a
    collision appears once the ball outgrows the prefix space.
    """
    if not M.is_invertible():
        raise ValueError("witness search needs an invertible automaton")
    a = M.n_letters
    xi = M.letter_index(x)
    L = n + lookahead
    mod = a**n
    v0 = sum(xi * a**i for i in range(L))

    if n == 0:
        # any state moving x^infinity will do
        for q in M.states:
            w = GroupWord([(q, 1)])
            if act_inf(M, w, EventuallyPeriodicWord.constant(x)) != EventuallyPeriodicWord.constant(x):
                return w
        raise WitnessNotFound(0, budget)

    gens = [(qi, s) for qi in range(M.n_states) for s in (1, -1)]
    words: dict[int, tuple] = {v0: ()}  # image -> letter tuple, rightmost first
    by_prefix: dict[int, int] = {v0 % mod: v0}
    frontier = [v0]
    for _ in range(budget):
        nxt = []
        for v in frontier:
            wv = words[v]
            for qi, s in gens:
                u = _act_index(M, qi, s, v, L)
                if u in words:
                    continue
                wu = wv + ((M.states[qi], s),)
                words[u] = wu
                pref = u % mod
                other = by_prefix.get(pref)
                if other is None:
                    by_prefix[pref] = u
                elif other != u:
                    # act(w2^{-1} w1, x^n) = x^n while the long images differ
                    w1 = GroupWord(tuple(reversed(wu)))
                    w2 = GroupWord(tuple(reversed(words[other])))
                    return (w2.inverse() * w1).reduce()
                nxt.append(u)
        frontier = nxt
        if not frontier:
            break
    raise WitnessNotFound(n, budget)


def first_divergence(M: Automaton, w: GroupWord, x: str, cap: int = 4096) -> int | None:
    """First position where act(w, x x x ...) differs from x x x ..., or None."""
    img = act_inf(M, w, EventuallyPeriodicWord.constant(x))
    for i, y in enumerate(img.preperiod):
        if y != x:
            return i
    if img.period == (x,):
        return None
    h = len(img.preperiod)
    for j, y in enumerate(img.period):
        if y != x:
            return h + j
    return None


_cycler_cache: dict[tuple, GroupWord] = {}


def level_cycler(M: Automaton, x: str, m: int, budget: int | None = None) -> GroupWord:
    """A group word fixing x^m whose image of x x x... first diverges at m.

    Obtained by sectioning a level witness down to its divergence point:
    if u fixes x^k and moves position k, its section at x^{k-m} fixes x^m
    and moves position m.
    """
    key = (M, x, m)
    got = _cycler_cache.get(key)
    if got is not None:
        return got
    budget = budget if budget is not None else max(2 * (m + 1), 8)
    u = find_level_witness(M, x, m, budget)
    k = first_divergence(M, u, x)
    assert k is not None and k >= m, "witness contract violated"
    w = u
    if k > m:
        w = group_section(M, u, (x,) * (k - m)).reduce()
        assert first_divergence(M, w, x) == m
    _cycler_cache[key] = w
    return w


def steer_to(M: Automaton, x: str, s) -> GroupWord:
    """A group word w with act(w, s) = x^|s|, built level by level.

    At level m the current image already starts with x^m; the level-m
    cycler's section permutes the letter at position m by a nontrivial power
    of the alphabet cycle, so at most |A| - 1 applications fix it.  The
    result is length O(n^2) and is verified by act before returning.
    """
    letters = tuple(s)
    n = len(letters)
    target = (x,) * n
    cur = letters
    total = GroupWord()
    p = M.n_letters
    for m in range(n):
        if cur[m] == x:
            continue
        cyc = level_cycler(M, x, m)
        applied = 0
        while cur[m] != x:
            applied += 1
            if applied > p:
                raise RuntimeError("cycler failed to move the level letter through a full cycle")
            cur = tuple(act(M, cyc, cur))
            total = cyc * total
        assert cur[: m + 1] == (x,) * (m + 1)
    total = total.reduce()
    assert tuple(act(M, total, letters)) == target, "steering self-check failed"
    return total


# -- lift structure ------------------------------------------------------------


class LiftReport:
    __slots__ = ("ok", "rules", "counterexample", "max_level")

    def __init__(self, ok, rules, counterexample, max_level):
        self.ok = ok
        self.rules = rules
        self.counterexample = counterexample
        self.max_level = max_level

    def __repr__(self) -> str:
        return f"LiftReport(ok={self.ok}, rules={self.rules})"


def lift_rules(M: Automaton) -> dict[str, tuple[tuple[str, ...], bool]] | None:
    """Per-target-state 2-lift rules, if the automaton has clean ones.

    For a binary-alphabet automaton: an r-edge of level n lifts to the
    q-edges over first letters eps with q^eps = r.  When each target r has
    exactly one lifting state per first letter and the two lifted edges
    agree on crossing (sigma_q(eps) != eps), the rule is
    r -> ((label at eps=0, label at eps=1), crossed).
    """
    if M.n_letters != 2:
        return None
    rules = {}
    for ri, r in enumerate(M.states):
        pairs = [
            (qi, eps)
            for qi in range(M.n_states)
            for eps in range(2)
            if int(M.t[qi, eps]) == ri
        ]
        if len(pairs) != 2 or {eps for _, eps in pairs} != {0, 1}:
            return None
        by_eps = dict((eps, qi) for qi, eps in pairs)
        crossings = {int(M.o[qi, eps]) != eps for qi, eps in pairs}
        if len(crossings) != 1:
            return None
        rules[r] = (
            (M.states[by_eps[0]], M.states[by_eps[1]]),
            crossings.pop(),
        )
    return rules


def verify_lift(M: Automaton, n: int) -> LiftReport:
    """Check the projection law and the lift structure up to level n.

    Level k+1 actions are recomputed by direct per-word transducer walks and
    compared against the projection law act(q, eps v) = sigma_q(eps) .
    act(q^eps, v); for binary automata with clean 2-lift rules the rules are
    extracted and returned.
    """
    a = M.n_letters
    by_walk: list[np.ndarray] = [np.zeros((M.n_states, 1), dtype=np.int64)]
    for k in range(1, n + 1):
        size = a**k
        arr = np.empty((M.n_states, size), dtype=np.int64)
        for qi in range(M.n_states):
            for v in range(size):
                arr[qi, v] = _act_index(M, qi, 1, v, k)
        by_walk.append(arr)
    counter = None
    for k in range(n):
        cur, nxt = by_walk[k], by_walk[k + 1]
        for qi in range(M.n_states):
            for eps in range(a):
                want = int(M.o[qi, eps]) + a * cur[int(M.t[qi, eps])]
                if not (nxt[qi, eps::a] == want).all():
                    bad = int(np.nonzero(nxt[qi, eps::a] != want)[0][0])
                    counter = {
                        "level": k + 1,
                        "state": M.states[qi],
                        "first_letter": M.alphabet[eps],
                        "vertex": int(bad * a + eps),
                    }
                    return LiftReport(False, lift_rules(M), counter, n)
    return LiftReport(True, lift_rules(M), None, n)


BELLATERRA_LIFT_RULES = {
    "a": (("c", "c"), True),
    "b": (("a", "b"), False),
    "c": (("b", "a"), False),
}

ALESHIN_LIFT_RULES = {
    "a": (("c", "c"), False),
    "b": (("a", "b"), True),
    "c": (("b", "a"), True),
}
