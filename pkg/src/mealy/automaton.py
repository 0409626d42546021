"""Mealy automata: construction, algebra, and actions on words.

A Mealy automaton M = (Q, A, tau, sigma) is a letter-to-letter transducer
with total transition table tau: Q x A -> Q and output table sigma:
Q x A -> A.  Every state q induces a length-preserving map on words over A
(written act(q, s)); these maps are tree automorphisms when M is invertible.

The dual automaton swaps the roles of states and letters; its action is the
tau-tilde action on state words (rightmost letter acted first).
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

import numpy as np

from .words import EventuallyPeriodicWord, GroupWord, coerce_symbols, format_symbols


class Automaton:
    """Immutable Mealy automaton with integer-indexed tables.

    states and alphabet are ordered tuples of distinct symbols; t and o are
    (|Q|, |A|) integer arrays: t[q][x] is the next-state index, o[q][x] the
    output-letter index.
    """

    __slots__ = ("states", "alphabet", "t", "o", "name", "_sidx", "_aidx", "_inv_out", "_hash")

    def __init__(
        self,
        states: Sequence[str],
        alphabet: Sequence[str],
        transition,
        output,
        name: str | None = None,
    ):
        self.states = tuple(str(q) for q in states)
        self.alphabet = tuple(str(x) for x in alphabet)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state symbols")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letter symbols")
        self._sidx = {q: i for i, q in enumerate(self.states)}
        self._aidx = {x: i for i, x in enumerate(self.alphabet)}
        nq, na = len(self.states), len(self.alphabet)

        if isinstance(transition, Mapping):
            t = np.empty((nq, na), dtype=np.int64)
            o = np.empty((nq, na), dtype=np.int64)
            seen = set()
            for (q, x), r in transition.items():
                t[self._sidx[q], self._aidx[x]] = self._sidx[r]
                seen.add((q, x))
            if len(seen) != nq * na:
                raise ValueError("transition table is not total")
            seen = set()
            for (q, x), y in output.items():
                o[self._sidx[q], self._aidx[x]] = self._aidx[y]
                seen.add((q, x))
            if len(seen) != nq * na:
                raise ValueError("output table is not total")
        else:
            t = np.asarray(transition, dtype=np.int64).reshape(nq, na).copy()
            o = np.asarray(output, dtype=np.int64).reshape(nq, na).copy()
        if t.min(initial=0) < 0 or (nq and t.max(initial=0) >= nq):
            raise ValueError("transition index out of range")
        if o.min(initial=0) < 0 or (nq and o.max(initial=0) >= na):
            raise ValueError("output index out of range")
        t.setflags(write=False)
        o.setflags(write=False)
        self.t = t
        self.o = o
        self.name = name
        self._inv_out = None
        self._hash = None

    # -- basic access ------------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_letters(self) -> int:
        return len(self.alphabet)

    def state_index(self, q: str) -> int:
        try:
            return self._sidx[q]
        except KeyError:
            raise KeyError(f"unknown state {q!r}; states are {self.states}") from None

    def letter_index(self, x: str) -> int:
        try:
            return self._aidx[x]
        except KeyError:
            raise KeyError(f"unknown letter {x!r}; alphabet is {self.alphabet}") from None

    def step(self, q: str, x: str) -> tuple[str, str]:
        """One transducer step: returns (written letter, next state)."""
        qi, xi = self.state_index(q), self.letter_index(x)
        return self.alphabet[self.o[qi, xi]], self.states[self.t[qi, xi]]

    def is_invertible(self) -> bool:
        nq, na = self.o.shape
        return all(len(set(self.o[q])) == na for q in range(nq))

    def inv_out(self) -> np.ndarray:
        """Per-state inverse output: inv_out[q][y] = x with o[q][x] = y."""
        if self._inv_out is None:
            if not self.is_invertible():
                raise ValueError("automaton is not invertible")
            nq, na = self.o.shape
            inv = np.empty_like(self.o)
            cols = np.arange(na)
            for q in range(nq):
                inv[q, self.o[q]] = cols
            inv.setflags(write=False)
            self._inv_out = inv
        return self._inv_out

    def table_key(self) -> tuple:
        return (self.states, self.alphabet, self.t.tobytes(), self.o.tobytes())

    def __eq__(self, other) -> bool:
        return isinstance(other, Automaton) and self.table_key() == other.table_key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.table_key())
        return self._hash

    def __repr__(self) -> str:
        label = self.name or "automaton"
        return f"<{label}: {self.n_states} states over {self.n_letters} letters>"

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [
            "states: " + " ".join(self.states),
            "alphabet: " + " ".join(self.alphabet),
        ]
        for qi, q in enumerate(self.states):
            for xi, x in enumerate(self.alphabet):
                lines.append(f"{q} {x} {self.alphabet[self.o[qi, xi]]} {self.states[self.t[qi, xi]]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str | None = None) -> "Automaton":
        rows = []
        states: list[str] | None = None
        alphabet: list[str] | None = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("states:"):
                states = line[len("states:"):].split()
            elif line.startswith("alphabet:"):
                alphabet = line[len("alphabet:"):].split()
            else:
                parts = line.split()
                if len(parts) != 4:
                    raise ValueError(f"bad table row: {raw!r}")
                rows.append(tuple(parts))
        if states is None or alphabet is None:
            raise ValueError("missing states: or alphabet: header")
        tr: dict[tuple[str, str], str] = {}
        out: dict[tuple[str, str], str] = {}
        for q, x, y, r in rows:
            if (q, x) in tr:
                raise ValueError(f"duplicate row for ({q}, {x})")
            tr[(q, x)] = r
            out[(q, x)] = y
        if len(tr) != len(states) * len(alphabet):
            raise ValueError("missing table rows")
        return cls(states, alphabet, tr, out, name=name)

    def to_dot(self) -> str:
        lines = [f'digraph "{self.name or "mealy"}" {{']
        for q in self.states:
            lines.append(f'  "{q}";')
        for qi, q in enumerate(self.states):
            for xi, x in enumerate(self.alphabet):
                y = self.alphabet[self.o[qi, xi]]
                r = self.states[self.t[qi, xi]]
                lines.append(f'  "{q}" -> "{r}" [label="{x}|{y}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- built-in automata -----------------------------------------------------

def _from_rows(states, alphabet, rows, name):
    tr = {(q, x): r for q, x, _, r in rows}
    out = {(q, x): y for q, x, y, _ in rows}
    return Automaton(states, alphabet, tr, out, name=name)


def _affine(k: int, m: int) -> Automaton:
    """Automaton of x -> (x - q) / k on m-adic integers, for gcd(k, m) = 1.

    State q sends input digit x to the digit y with q + k*y = x + m*b and
    moves to state b; reading x as a least-significant-digit-first integer,
    state q computes (x - q) * k^{-1} mod m^n on every level n.
    """
    import math

    if math.gcd(k, m) != 1:
        raise ValueError(f"affine({k},{m}) needs gcd(k, m) = 1")
    kinv = pow(k, -1, m)
    states = [str(q) for q in range(k)]
    alphabet = [str(x) for x in range(m)]
    rows = []
    for q in range(k):
        for x in range(m):
            y = ((x - q) * kinv) % m
            b = (q + k * y - x) // m
            rows.append((str(q), str(x), str(y), str(b)))
    return _from_rows(states, alphabet, rows, f"affine({k},{m})" if (k, m) != (3, 2) else "div3")


_BUILTIN_ROWS = {
    "bellaterra": (
        ("a", "b", "c"),
        ("0", "1"),
        [
            ("a", "0", "0", "b"), ("a", "1", "1", "c"),
            ("b", "0", "0", "c"), ("b", "1", "1", "b"),
            ("c", "0", "1", "a"), ("c", "1", "0", "a"),
        ],
    ),
    "aleshin": (
        ("a", "b", "c"),
        ("0", "1"),
        [
            ("a", "0", "1", "b"), ("a", "1", "0", "c"),
            ("b", "0", "1", "c"), ("b", "1", "0", "b"),
            ("c", "0", "0", "a"), ("c", "1", "1", "a"),
        ],
    ),
    "adding": (
        ("r", "i"),
        ("0", "1"),
        [
            ("r", "0", "1", "i"), ("r", "1", "0", "r"),
            ("i", "0", "0", "i"), ("i", "1", "1", "i"),
        ],
    ),
    "conjugator": (
        ("a", "b", "c"),
        ("x", "y"),
        [
            ("a", "x", "x", "c"), ("a", "y", "y", "a"),
            ("b", "x", "y", "b"), ("b", "y", "x", "b"),
            ("c", "x", "x", "a"), ("c", "y", "y", "c"),
        ],
    ),
    "bireversible52": (
        ("a", "b", "c", "d", "e"),
        ("0", "1"),
        [
            ("a", "0", "1", "b"), ("a", "1", "0", "a"),
            ("b", "0", "0", "c"), ("b", "1", "1", "e"),
            ("c", "0", "0", "d"), ("c", "1", "1", "d"),
            ("d", "0", "0", "e"), ("d", "1", "1", "c"),
            ("e", "0", "1", "a"), ("e", "1", "0", "b"),
        ],
    ),
}

BUILTIN_NAMES = tuple(sorted(_BUILTIN_ROWS)) + ("div3", "affine(k,m)")


def builtin(name: str) -> Automaton:
    """Return a named built-in automaton.

    Known names: bellaterra, aleshin, adding, div3, conjugator,
    bireversible52, and affine(k,m) for gcd(k, m) = 1.
    """
    name = name.strip()
    if name == "div3":
        return _affine(3, 2)
    m = re.fullmatch(r"affine\((\d+),\s*(\d+)\)", name)
    if m:
        return _affine(int(m.group(1)), int(m.group(2)))
    if name in _BUILTIN_ROWS:
        states, alphabet, rows = _BUILTIN_ROWS[name]
        return _from_rows(states, alphabet, rows, name)
    raise KeyError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")


# -- predicates ------------------------------------------------------------

def _perm_group_is_full_cycle(perms: list[tuple[int, ...]], n: int) -> bool:
    """Whether <perms> is exactly the cyclic group of one full n-cycle."""
    if n == 1:
        return True
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(p) for p in perms]
    while frontier:
        if len(seen) > n:
            return False
        nxt = []
        for g in frontier:
            for p in gens:
                h = tuple(p[g[i]] for i in range(n))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    if len(seen) != n:
        return False
    return any(_is_full_cycle(g) for g in seen)


def _is_full_cycle(perm: tuple[int, ...]) -> bool:
    n = len(perm)
    v, count = 0, 0
    while True:
        v = perm[v]
        count += 1
        if v == 0:
            return count == n


class Properties:
    __slots__ = ("invertible", "reversible", "bireversible", "cyclic", "cocyclic")

    def __init__(self, invertible, reversible, bireversible, cyclic, cocyclic):
        self.invertible = invertible
        self.reversible = reversible
        self.bireversible = bireversible
        self.cyclic = cyclic
        self.cocyclic = cocyclic

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__slots__}

    def __repr__(self) -> str:
        flags = ", ".join(f"{k}={getattr(self, k)}" for k in self.__slots__)
        return f"Properties({flags})"


def _is_cyclic(M: Automaton) -> bool:
    if not M.is_invertible():
        return False
    perms = [tuple(int(v) for v in M.o[q]) for q in range(M.n_states)]
    return _perm_group_is_full_cycle(perms, M.n_letters)


def properties(M: Automaton) -> Properties:
    """Invertibility, reversibility, bireversibility, cyclicity, cocyclicity.

    invertible: every sigma_q is a permutation of A.  reversible: the dual is
    invertible.  bireversible: invertible, reversible, and the inverse is
    reversible.  cyclic: invertible with <sigma_q> equal to the group
    generated by a single full |A|-cycle.  cocyclic: the dual is cyclic.
    """
    inv = M.is_invertible()
    D = dual(M)
    rev = D.is_invertible()
    bi = False
    if inv and rev:
        bi = dual(inverse(M)).is_invertible()
    cyc = _is_cyclic(M)
    cocyc = _is_cyclic(D)
    return Properties(inv, rev, bi, cyc, cocyc)


# -- automaton algebra -----------------------------------------------------

def dual(M: Automaton) -> Automaton:
    """Swap the roles of states and letters.

    q --x|y--> r in M becomes x --q|r--> y in the dual: the dual state x
    reads a state q, writes the M-transition q^x, and moves to sigma_q(x).
    """
    name = None
    if M.name:
        name = M.name[5:] if M.name.startswith("dual(") and M.name.endswith(")") else f"dual({M.name})"
    return Automaton(M.alphabet, M.states, M.o.T, M.t.T, name=name)


def inverse(M: Automaton) -> Automaton:
    """The inverse automaton: state q' undoes the action of q.

    sigma'_{q'} = sigma_q^{-1} and tau'(q', y) = tau(q, sigma_q^{-1}(y)).
    States are renamed with a trailing apostrophe.
    """
    inv_o = M.inv_out()
    nq = M.n_states
    t = np.empty_like(M.t)
    for q in range(nq):
        t[q] = M.t[q, inv_o[q]]
    states = tuple(q + "'" for q in M.states)
    name = f"inverse({M.name})" if M.name else None
    return Automaton(states, M.alphabet, t, inv_o, name=name)


def union(M1: Automaton, M2: Automaton) -> Automaton:
    """Disjoint union over a common alphabet.

    Colliding state names from M2 get a numeric suffix so that unions like
    M with inverse(M) always work.
    """
    if M1.alphabet != M2.alphabet:
        raise ValueError("union needs identical alphabets")
    names = list(M1.states)
    taken = set(names)
    renamed = []
    for q in M2.states:
        new = q
        k = 2
        while new in taken:
            new = f"{q}_{k}"
            k += 1
        taken.add(new)
        renamed.append(new)
    states = names + renamed
    t = np.vstack([M1.t, M2.t + M1.n_states])
    o = np.vstack([M1.o, M2.o])
    name = None
    if M1.name and M2.name:
        name = f"{M1.name}+{M2.name}"
    return Automaton(states, M1.alphabet, t, o, name=name)


def relabel(M: Automaton, state_perm: Sequence[int], letter_perm: Sequence[int]) -> Automaton:
    """Relabel states and letters by index permutations, keeping symbol names.

    The new state i behaves like the old state state_perm^{-1}(i) with
    letters renamed by letter_perm.
    """
    sp = np.asarray(state_perm, dtype=np.int64)
    lp = np.asarray(letter_perm, dtype=np.int64)
    sp_inv = np.empty_like(sp)
    sp_inv[sp] = np.arange(len(sp))
    lp_inv = np.empty_like(lp)
    lp_inv[lp] = np.arange(len(lp))
    t = sp[M.t[sp_inv][:, lp_inv]]
    o = lp[M.o[sp_inv][:, lp_inv]]
    return Automaton(M.states, M.alphabet, t, o, name=M.name)


# -- actions ---------------------------------------------------------------

def _signed_letters(M: Automaton, w) -> list[tuple[int, int]]:
    if isinstance(w, str):
        # a bare state name (possibly primed) wins over character splitting,
        # so multi-character states like product's t0 are usable directly
        if w in M._sidx:
            return [(M._sidx[w], 1)]
        if w.endswith("'") and w[:-1] in M._sidx:
            M.inv_out()
            return [(M._sidx[w[:-1]], -1)]
    gw = GroupWord.of(w)
    out = []
    for q, s in gw.letters:
        out.append((M.state_index(q), s))
        if s < 0:
            M.inv_out()  # raises if not invertible
    return out


def _step_signed(M: Automaton, qi: int, sign: int, xi: int) -> tuple[int, int]:
    """One step of state qi (or its inverse) on input letter index xi."""
    if sign > 0:
        return int(M.o[qi, xi]), int(M.t[qi, xi])
    x0 = int(M.inv_out()[qi, xi])
    return x0, int(M.t[qi, x0])


def act(M: Automaton, w, s):
    """Apply the group word w to the letter word s, rightmost letter first.

    Length preserving; act(uv, s) = act(u, act(v, s)).  Inverse letters
    require M invertible.
    """
    letters = coerce_symbols(s)
    idx = [M.letter_index(x) for x in letters]
    for qi, sign in reversed(_signed_letters(M, w)):
        cur = qi
        for i, xi in enumerate(idx):
            y, cur = _step_signed(M, cur, sign, xi)
            idx[i] = y
    return format_symbols([M.alphabet[i] for i in idx], s)


def act_inf(M: Automaton, w, e: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """Apply w to an eventually periodic word; the image is again one.

    The pair (machine states of w, position inside the input period) can
    take finitely many values, so the output stream is detected by cycle
    detection and returned in canonical form.
    """
    sig = _signed_letters(M, w)
    states = [qi for qi, _ in sig]
    signs = [sg for _, sg in sig]

    def feed(xi: int) -> int:
        for j in range(len(states) - 1, -1, -1):
            xi, states[j] = _step_signed(M, states[j], signs[j], xi)
        return xi

    out: list[str] = []
    for x in e.preperiod:
        out.append(M.alphabet[feed(M.letter_index(x))])
    per_idx = [M.letter_index(x) for x in e.period]
    seen: dict[tuple, int] = {}
    pos = 0
    while True:
        key = (tuple(states), pos)
        if key in seen:
            start = seen[key]
            return EventuallyPeriodicWord(out[:start], out[start:])
        seen[key] = len(out)
        out.append(M.alphabet[feed(per_idx[pos])])
        pos = (pos + 1) % len(per_idx)


def dual_act(M: Automaton, v, s):
    """The dual action of the letter word s on the state word v.

    The rightmost state of v is acted on first:
    (... q1 q0)^x = (... q1)^{sigma_{q0}(x)} (q0^x), and a longer s acts
    letter by letter in reading order.
    """
    word = [M.state_index(q) for q in coerce_symbols(v)]
    for x in coerce_symbols(s):
        xi = M.letter_index(x)
        for j in range(len(word) - 1, -1, -1):
            q = word[j]
            word[j] = int(M.t[q, xi])
            xi = int(M.o[q, xi])
    return format_symbols([M.states[q] for q in word], v)


def group_section(M: Automaton, w, s) -> GroupWord:
    """Section of the group word w at the letter word s.

    Satisfies act(w, s ++ t) = act(w, s) ++ act(group_section(w, s), t).
    For positive words this agrees with dual_act; inverse letters use
    (g^{-1})|_s = (g|_{act(g^{-1}, s)})^{-1}.
    """
    letters = list(_signed_letters(M, GroupWord.of(w)))
    cur = [M.letter_index(x) for x in coerce_symbols(s)]
    sections: list[tuple[str, int]] = [("", 0)] * len(letters)
    for j in range(len(letters) - 1, -1, -1):
        qi, sign = letters[j]
        state = qi
        nxt = []
        for xi in cur:
            y, state2 = _step_signed(M, state, sign, xi)
            nxt.append(y)
            state = state2
        sections[j] = (M.states[state], sign)
        cur = nxt
    return GroupWord(sections)


# -- composition and minimization -------------------------------------------

def product(parts: Sequence[tuple[Automaton, "GroupWord | str"]]) -> tuple[Automaton, str]:
    """Compose several automaton actions into one automaton.

    Each part is (automaton, group word over its states); the composite's
    designated state acts as the left-to-right composition with the leftmost
    part applied last, i.e. like act(part0, act(part1, ... act(partk, s))).
    Only composite states reachable from the designated tuple are built.
    Returns (automaton, designated state symbol).
    """
    if not parts:
        raise ValueError("product of zero parts")
    machines = [p[0] for p in parts]
    alphabet = machines[0].alphabet
    for M in machines[1:]:
        if M.alphabet != alphabet:
            raise ValueError("product needs one common alphabet")
    # flatten to a stack of (machine index, state index, sign), rightmost first
    stack: list[tuple[int, int, int]] = []
    for mi in range(len(parts) - 1, -1, -1):
        M, w = machines[mi], GroupWord.of(parts[mi][1])
        for qi, sign in reversed(_signed_letters(M, w)):
            stack.append((mi, qi, sign))
    start = tuple(stack)
    na = len(alphabet)

    index: dict[tuple, int] = {start: 0}
    order = [start]
    t_rows: list[list[int]] = []
    o_rows: list[list[int]] = []
    head = 0
    while head < len(order):
        node = order[head]
        head += 1
        trow, orow = [], []
        for xi in range(na):
            cur = xi
            nxt = []
            for mi, qi, sign in node:
                cur, q2 = _step_signed(machines[mi], qi, sign, cur)
                nxt.append((mi, q2, sign))
            child = tuple(nxt)
            if child not in index:
                index[child] = len(order)
                order.append(child)
            trow.append(index[child])
            orow.append(cur)
        t_rows.append(trow)
        o_rows.append(orow)
    states = [f"t{i}" for i in range(len(order))]
    return Automaton(states, alphabet, t_rows, o_rows, name="product"), "t0"


def minimize_map(M: Automaton) -> tuple[Automaton, dict[str, str]]:
    """Merge states with identical actions; also return old-to-new name map.

    Partition refinement on (output row, transition row block signature)
    until stable.  Two states end in one block iff they act identically on
    every letter word.
    """
    nq, na = M.n_states, M.n_letters
    block = [0] * nq
    sig0 = {}
    for q in range(nq):
        key = tuple(M.o[q])
        block[q] = sig0.setdefault(key, len(sig0))
    while True:
        sig: dict[tuple, int] = {}
        new = [0] * nq
        for q in range(nq):
            key = (block[q], tuple(block[int(r)] for r in M.t[q]))
            new[q] = sig.setdefault(key, len(sig))
        if new == block:
            break
        block = new
    n_blocks = max(block) + 1 if nq else 0
    rep = [None] * n_blocks
    for q in range(nq):
        if rep[block[q]] is None:
            rep[block[q]] = q
    states = [M.states[r] for r in rep]
    t = [[block[int(M.t[r, x])] for x in range(na)] for r in rep]
    o = [[int(M.o[r, x]) for x in range(na)] for r in rep]
    mapping = {M.states[q]: M.states[rep[block[q]]] for q in range(nq)}
    name = f"min({M.name})" if M.name else None
    return Automaton(states, M.alphabet, t, o, name=name), mapping


def minimize(M: Automaton) -> Automaton:
    return minimize_map(M)[0]
