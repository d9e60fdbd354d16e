"""Finite automata over a small explicit alphabet.

The semantic alphabet for Kleene-semiring terms is the set of declared
letters plus the distinguished symbol ``ZERO_SYMBOL``, which interprets the
constant 0 in the closed-language model.  Letters must start with a
lower-case ASCII letter, so the string ``"0"`` can never collide with one.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

ZERO_SYMBOL = "0"

Word = tuple[str, ...]


class Outcome(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Word | None = None
    bound: int | None = None

    @classmethod
    def equal(cls) -> Verdict:
        return cls(Outcome.EQUAL)

    @classmethod
    def unequal(cls, witness: Sequence[str]) -> Verdict:
        return cls(Outcome.UNEQUAL, tuple(witness))

    @classmethod
    def inconclusive(cls, bound: int) -> Verdict:
        return cls(Outcome.INCONCLUSIVE, bound=bound)

    @property
    def is_equal(self) -> bool:
        return self.outcome is Outcome.EQUAL

    def __str__(self):
        if self.outcome is Outcome.UNEQUAL:
            return f"unequal (witness {render_word(self.witness)!r})"
        if self.outcome is Outcome.INCONCLUSIVE:
            return f"inconclusive at bound {self.bound}"
        return "equal"


def render_word(word: Sequence[str]) -> str:
    """Print a word; multi-character letters force space separation."""
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return " ".join(word)


def parse_word(text: str, symbols: Iterable[str] | None = None) -> Word:
    text = text.strip()
    if " " in text or (symbols is not None and any(len(s) > 1 for s in symbols)):
        return tuple(text.split())
    return tuple(text)


@dataclass(frozen=True, eq=False)
class Nfa:
    """Epsilon-free NFA; ``delta[q]`` maps a symbol to successor states."""

    symbols: tuple[str, ...]
    delta: tuple[dict[str, frozenset[int]], ...]
    initial: frozenset[int]
    accepting: frozenset[int]
    saturated: bool = False

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(len(self.delta))

    @property
    def transitions(self) -> set[tuple[int, str, int]]:
        return {(q, a, r) for q, row in enumerate(self.delta)
                for a, targets in row.items() for r in targets}

    def step(self, states: Iterable[int], symbol: str) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out.update(self.delta[q].get(symbol, ()))
        return frozenset(out)

    def accepts(self, word: Sequence[str]) -> bool:
        current = self.initial
        for a in word:
            current = self.step(current, a)
            if not current:
                return False
        return bool(current & self.accepting)

    def as_nfa(self) -> Nfa:
        return self

    def to_dot(self, name: str = "nfa") -> str:
        return _dot(name, self.n_states, self.initial, self.accepting,
                    sorted(self.transitions))


@dataclass(frozen=True, eq=False)
class Dfa:
    """Complete DFA; ``delta[q][i]`` is the successor on ``symbols[i]``."""

    symbols: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]
    start: int = 0
    saturated: bool = False

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def accepts(self, word: Sequence[str]) -> bool:
        pos = {a: i for i, a in enumerate(self.symbols)}
        q = self.start
        for a in word:
            if a not in pos:
                return False
            q = self.delta[q][pos[a]]
        return q in self.accepting

    def as_nfa(self) -> Nfa:
        delta = tuple({a: frozenset((row[i],)) for i, a in enumerate(self.symbols)}
                      for row in self.delta)
        return Nfa(self.symbols, delta, frozenset((self.start,)), self.accepting,
                   self.saturated)

    def to_dot(self, name: str = "dfa") -> str:
        edges = [(q, a, r) for q, row in enumerate(self.delta)
                 for a, r in zip(self.symbols, row)]
        return _dot(name, self.n_states, {self.start}, self.accepting, edges)


def _dot(name, n, initial, accepting, edges) -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];"]
    for q in range(n):
        shape = "doublecircle" if q in accepting else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    for q in sorted(initial):
        lines.append(f"  __start -> q{q};")
    for q, a, r in edges:
        lines.append(f'  q{q} -> q{r} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


Automaton = Nfa | Dfa


# ---------------------------------------------------------------------------
# subset construction and minimization
# ---------------------------------------------------------------------------

def determinize(nfa: Nfa) -> Dfa:
    symbols = nfa.symbols
    start = nfa.initial
    ids = {start: 0}
    order = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        current = order[i]
        row = []
        for a in symbols:
            nxt = nfa.step(current, a)
            j = ids.get(nxt)
            if j is None:
                j = ids[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(j for j, s in enumerate(order) if s & nfa.accepting)
    return Dfa(symbols, tuple(rows), accepting, 0, nfa.saturated)


def minimize(dfa: Dfa) -> Dfa:
    """Minimal complete DFA, renumbered in breadth-first order from the start.

    The numbering makes the result canonical: two DFAs over the same symbol
    tuple accept the same language iff their minimizations are identical.
    """
    delta = dfa.delta
    n = len(delta)
    block = [1 if q in dfa.accepting else 0 for q in range(n)]
    count = len(set(block))
    while True:
        signatures: dict[tuple, int] = {}
        new_block = []
        for q in range(n):
            sig = (block[q],) + tuple(block[r] for r in delta[q])
            new_block.append(signatures.setdefault(sig, len(signatures)))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)

    # representative transitions per block, then canonical BFS renumbering
    rep: dict[int, int] = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    start_block = block[dfa.start]
    number = {start_block: 0}
    queue = deque([start_block])
    rows: list[tuple[int, ...]] = []
    accepting = set()
    while queue:
        b = queue.popleft()
        q = rep[b]
        if q in dfa.accepting:
            accepting.add(number[b])
        row = []
        for r in delta[q]:
            target = block[r]
            if target not in number:
                number[target] = len(number)
                queue.append(target)
            row.append(number[target])
        rows.append(tuple(row))
    return Dfa(dfa.symbols, tuple(rows), frozenset(accepting), 0, dfa.saturated)


def same_structure(x: Dfa, y: Dfa) -> bool:
    return (x.symbols == y.symbols and x.delta == y.delta
            and x.accepting == y.accepting and x.start == y.start)


# ---------------------------------------------------------------------------
# 0-saturation
# ---------------------------------------------------------------------------

def _reachability(nfa: Nfa) -> list[frozenset[int]]:
    succ = [set().union(*row.values()) if row else set() for row in nfa.delta]
    reach: list[frozenset[int]] = []
    for q in nfa.states:
        seen = {q}
        stack = [q]
        while stack:
            r = stack.pop()
            for s in succ[r]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        reach.append(frozenset(seen))
    return reach


def saturate_zero(automaton: Automaton) -> Nfa:
    """Add a 0-edge from every state to every state reachable from it.

    Saturation edges only join pairs that were already reachable, so one
    reachability pass over the input suffices.
    """
    nfa = automaton.as_nfa()
    if nfa.saturated:
        return nfa
    symbols = nfa.symbols if ZERO_SYMBOL in nfa.symbols else (ZERO_SYMBOL,) + nfa.symbols
    reach = _reachability(nfa)
    delta = []
    for q, row in enumerate(nfa.delta):
        row = dict(row)
        row[ZERO_SYMBOL] = row.get(ZERO_SYMBOL, frozenset()) | reach[q]
        delta.append(row)
    return Nfa(symbols, tuple(delta), nfa.initial, nfa.accepting, True)


def is_saturated(automaton: Automaton) -> bool:
    nfa = automaton.as_nfa()
    reach = _reachability(nfa)
    return all(reach[q] <= row.get(ZERO_SYMBOL, frozenset())
               for q, row in enumerate(nfa.delta))


# ---------------------------------------------------------------------------
# regular operations on DFAs (result is an NFA to be determinized)
# ---------------------------------------------------------------------------

def _dfa_rows(d: Dfa, offset: int) -> list[dict[str, frozenset[int]]]:
    return [{a: frozenset((r + offset,)) for a, r in zip(d.symbols, row)} for row in d.delta]


def union_nfa(x: Dfa, y: Dfa) -> Nfa:
    off = x.n_states
    delta = _dfa_rows(x, 0) + _dfa_rows(y, off)
    return Nfa(x.symbols, tuple(delta), frozenset((x.start, y.start + off)),
               x.accepting | {q + off for q in y.accepting})


def concat_nfa(x: Dfa, y: Dfa) -> Nfa:
    off = x.n_states
    delta = _dfa_rows(x, 0) + _dfa_rows(y, off)
    y_start_row = delta[y.start + off]
    for q in x.accepting:
        delta[q] = {a: delta[q][a] | y_start_row[a] for a in x.symbols}
    initial = {x.start}
    accepting = {q + off for q in y.accepting}
    if y.start in y.accepting:
        accepting |= x.accepting
    return Nfa(x.symbols, tuple(delta), frozenset(initial), frozenset(accepting))


def star_nfa(x: Dfa) -> Nfa:
    delta = _dfa_rows(x, 0)
    start_row = delta[x.start]
    for q in x.accepting:
        delta[q] = {a: delta[q][a] | start_row[a] for a in x.symbols}
    new = len(delta)
    delta.append(dict(start_row))
    return Nfa(x.symbols, tuple(delta), frozenset((new,)), x.accepting | {new})


def single_word_dfa(symbols: tuple[str, ...], word: Word) -> Dfa:
    n = len(word)
    sink = n + 1
    rows = []
    for i in range(n + 1):
        rows.append(tuple(i + 1 if i < n and a == word[i] else sink for a in symbols))
    rows.append(tuple(sink for _ in symbols))
    return Dfa(symbols, tuple(rows), frozenset((n,)))


def empty_dfa(symbols: tuple[str, ...]) -> Dfa:
    return Dfa(symbols, (tuple(0 for _ in symbols),), frozenset())


# ---------------------------------------------------------------------------
# equivalence and inclusion
# ---------------------------------------------------------------------------

def _difference_search(x: Automaton, y: Automaton, both_ways: bool) -> Verdict:
    """Breadth-first search of the on-the-fly determinized product.

    Pairs are expanded in (length, symbol order) order, so the first
    distinguishing word found is the shortest and, among those, the least.
    """
    nx, ny = x.as_nfa(), y.as_nfa()
    if nx.symbols != ny.symbols:
        symbols = tuple(sorted(set(nx.symbols) | set(ny.symbols)))
    else:
        symbols = tuple(sorted(nx.symbols))
    start = (nx.initial, ny.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        sx, sy = pair
        ax = bool(sx & nx.accepting)
        ay = bool(sy & ny.accepting)
        if (ax and not ay) or (both_ways and ay and not ax):
            word = []
            while parent[pair] is not None:
                pair, a = parent[pair]
                word.append(a)
            return Verdict.unequal(reversed(word))
        for a in symbols:
            nxt = (nx.step(sx, a), ny.step(sy, a))
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return Verdict.equal()


def equivalent(x: Automaton, y: Automaton) -> Verdict:
    """Equal iff the languages coincide; otherwise a shortest witness."""
    if isinstance(x, Dfa) and isinstance(y, Dfa):
        return _dfa_difference(x, y, both_ways=True)
    return _difference_search(x, y, both_ways=True)


def included(x: Automaton, y: Automaton) -> Verdict:
    """Equal iff L(x) is a subset of L(y); otherwise a shortest word of L(x) - L(y)."""
    if isinstance(x, Dfa) and isinstance(y, Dfa):
        return _dfa_difference(x, y, both_ways=False)
    return _difference_search(x, y, both_ways=False)


def _dfa_difference(x: Dfa, y: Dfa, both_ways: bool) -> Verdict:
    if x.symbols != y.symbols:
        return _difference_search(x, y, both_ways)
    symbols = x.symbols
    order = sorted(range(len(symbols)), key=lambda i: symbols[i])
    start = (x.start, y.start)
    parent: dict = {start: None}
    queue = deque([start])
    xd, yd, xf, yf = x.delta, y.delta, x.accepting, y.accepting
    while queue:
        pair = queue.popleft()
        p, q = pair
        ax, ay = p in xf, q in yf
        if (ax and not ay) or (both_ways and ay and not ax):
            word = []
            while parent[pair] is not None:
                pair, a = parent[pair]
                word.append(a)
            return Verdict.unequal(reversed(word))
        for i in order:
            nxt = (xd[p][i], yd[q][i])
            if nxt not in parent:
                parent[nxt] = (pair, symbols[i])
                queue.append(nxt)
    return Verdict.equal()


def words_up_to(automaton: Automaton, maxlen: int) -> set[Word]:
    """All accepted words of length <= maxlen (exhaustive; small bounds only)."""
    nfa = automaton.as_nfa()
    result: set[Word] = set()
    frontier = [((), nfa.initial)]
    for length in range(maxlen + 1):
        nxt = []
        for word, states in frontier:
            if states & nfa.accepting:
                result.add(word)
            if length < maxlen:
                for a in nfa.symbols:
                    s = nfa.step(states, a)
                    if s:
                        nxt.append((word + (a,), s))
        frontier = nxt
    return result
