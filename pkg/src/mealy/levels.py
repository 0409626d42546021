"""Level actions as integer arrays.

A word s_0 s_1 ... s_{n-1} over an alphabet of size a is indexed by
sum s_i * a^i: the first-read letter is the least significant digit, so the
arithmetic automata (adding machine, division automata) act on indices as
ordinary modular arithmetic.

The per-state level-n action satisfies the projection law
act(q, eps v) = sigma_q(eps) . act(q^eps, v), which gives the recursion used
here: the slice of positions with first letter eps maps through state q as
output digit o[q][eps] plus a times the level-(n-1) action of t[q][eps].
"""

from __future__ import annotations

import numpy as np

from .automaton import Automaton

LEVEL_CAP = 1 << 24


def _dtype_for(size: int):
    return np.int64 if size > (1 << 31) - 1 else np.int32


def word_index(M: Automaton, s) -> int:
    a = M.n_letters
    v = 0
    for i, x in enumerate(s):
        v += M.letter_index(x) * a**i
    return v


def index_word(M: Automaton, v: int, n: int) -> tuple[str, ...]:
    a = M.n_letters
    out = []
    for _ in range(n):
        out.append(M.alphabet[v % a])
        v //= a
    return tuple(out)


def level_maps(M: Automaton, n: int, cap: int = LEVEL_CAP) -> np.ndarray:
    """Array L with L[q][v] = index of act(q, word v) on level n.

    Works for non-invertible automata too (rows are then not permutations).
    Shape (|Q|, a^n).
    """
    a, nq = M.n_letters, M.n_states
    size = a**n
    if size > cap:
        raise MemoryError(f"level size {a}^{n} exceeds cap {cap}")
    dt = _dtype_for(size)
    P = np.zeros((nq, 1), dtype=dt)
    o = M.o.astype(dt)
    t = M.t
    for k in range(1, n + 1):
        new = np.empty((nq, a**k), dtype=dt)
        for q in range(nq):
            for x in range(a):
                new[q, x::a] = o[q, x] + a * P[t[q, x]]
        P = new
    return P


def all_level_maps(M: Automaton, n: int, cap: int = LEVEL_CAP) -> list[np.ndarray]:
    """level_maps for every level 0..n, cheapest-first (one recursion pass)."""
    a, nq = M.n_letters, M.n_states
    if a**n > cap:
        raise MemoryError(f"level size {a}^{n} exceeds cap {cap}")
    dt = _dtype_for(a**n)
    out = [np.zeros((nq, 1), dtype=dt)]
    o = M.o.astype(dt)
    t = M.t
    for k in range(1, n + 1):
        prev = out[-1]
        new = np.empty((nq, a**k), dtype=dt)
        for q in range(nq):
            for x in range(a):
                new[q, x::a] = o[q, x] + a * prev[t[q, x]]
        out.append(new)
    return out


def invert_perm(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def level_permutation(M: Automaton, w, n: int, cap: int = LEVEL_CAP) -> np.ndarray:
    """The permutation of {0..a^n - 1} induced by the group word w.

    Consistent with act on every word of length n; inverse letters require
    an invertible automaton.
    """
    from .automaton import _signed_letters

    letters = _signed_letters(M, w)
    if not M.is_invertible() and any(s < 0 for _, s in letters):
        raise ValueError("inverse letters need an invertible automaton")
    P = level_maps(M, n, cap=cap)
    size = P.shape[1]
    v = np.arange(size, dtype=P.dtype)
    inv_cache: dict[int, np.ndarray] = {}
    for qi, s in reversed(letters):
        if s > 0:
            v = P[qi][v]
        else:
            if qi not in inv_cache:
                inv_cache[qi] = invert_perm(P[qi])
            v = inv_cache[qi][v]
    return v


def is_single_cycle(p: np.ndarray) -> bool:
    """Whether the permutation p is one full-length cycle.

    Uses p^N = id plus p^{N/r} fixed-point-free for every prime r | N, with
    permutation powers computed by binary exponentiation (array gathers), so
    multi-million-point levels stay cheap.
    """
    N = len(p)
    if N <= 1:
        return True
    if np.bincount(p, minlength=N).max() != 1:
        return False

    def power(base: np.ndarray, e: int) -> np.ndarray:
        result = None
        while e:
            if e & 1:
                result = base.copy() if result is None else base[result]
            base = base[base]
            e >>= 1
        return result if result is not None else np.arange(N, dtype=p.dtype)

    n = N
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    for r in primes:
        q = power(p, N // r)
        if (q == np.arange(N, dtype=p.dtype)).any():
            return False
    full = power(p, N)
    return bool((full == np.arange(N, dtype=p.dtype)).all())


def has_spanning_orbit(F: np.ndarray) -> bool:
    """Whether some point's forward orbit under the map F covers everything.

    For a permutation this means a single cycle.  A non-bijective map can
    still span (a tail leading into a cycle), but only if at most one point
    is outside the image; in that case the covering orbit must start there.
    """
    N = len(F)
    if N <= 1:
        return True
    counts = np.bincount(F, minlength=N)
    missing = np.flatnonzero(counts == 0)
    if len(missing) > 1:
        return False
    if len(missing) == 0:
        return is_single_cycle(F)
    seen = np.zeros(N, dtype=bool)
    v = int(missing[0])
    steps = 0
    while not seen[v]:
        seen[v] = True
        v = int(F[v])
        steps += 1
    return steps == N
