"""Length-bounded refinement languages, computed without saturation or ``f``.

A word *refines* another when it is obtained by replacing substrings (possibly
empty ones) with the word ``0`` or with a word of a hypothesis term.  The
bounded language of a term is the set of all refinements of its words, read
classically with 0 as an ordinary symbol, up to a length bound.

Replacement words themselves refine, so the set ``W`` of admissible
replacement words is the least fixpoint of "refinements of the words of
0 + a1 + ... + ak".  Once ``W`` is closed, a word ``v`` refines a word of ``L``
iff it factors as ``t1 w1 t2 w2 ... tn`` with every ``wi`` in ``W`` and some
word ``t1 s1 t2 s2 ... tn`` in ``L``.  All ``wi`` are substrings of ``v``, so a
bound on ``v`` bounds everything the search needs and the result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..terms import ZERO, HoareHypothesis, Sum, Term, letters
from .automata import ZERO_SYMBOL, Nfa, Word
from .construct import KS, glushkov, semantic_symbols

DEFAULT_MAXLEN = 6
DEFAULT_BUDGET = 200_000


class OracleBudgetExceeded(RuntimeError):
    """The bounded oracle would exceed its word-set cap at this bound."""


@dataclass(frozen=True)
class BoundedLanguage:
    maxlen: int
    words: frozenset[Word]

    def __contains__(self, word) -> bool:
        return tuple(word) in self.words

    def __len__(self):
        return len(self.words)

    def shortest_difference(self, other: BoundedLanguage) -> Word | None:
        diff = self.words ^ other.words
        if not diff:
            return None
        return min(diff, key=lambda w: (len(w), w))


class _Searcher:
    """Enumerates the refinements (up to a bound) of one source automaton."""

    def __init__(self, nfa: Nfa, symbols: tuple[str, ...], maxlen: int, budget: int):
        self.nfa = nfa
        self.symbols = symbols
        self.maxlen = maxlen
        self.budget = budget
        succ = [frozenset().union(*row.values()) if row else frozenset() for row in nfa.delta]
        self.reach = []
        for q in nfa.states:
            seen = {q}
            stack = [q]
            while stack:
                r = stack.pop()
                for s in succ[r]:
                    if s not in seen:
                        seen.add(s)
                        stack.append(s)
            self.reach.append(frozenset(seen))
        self._reach_cache: dict[frozenset, frozenset] = {}

    def reach_of(self, states: frozenset) -> frozenset:
        r = self._reach_cache.get(states)
        if r is None:
            r = frozenset().union(*(self.reach[q] for q in states)) if states else frozenset()
            self._reach_cache[states] = r
        return r

    def run(self, replacements: frozenset[Word]) -> set[Word]:
        nfa = self.nfa
        prefixes = {w[:i] for w in replacements for i in range(1, len(w) + 1)}
        eps = () in replacements
        found: set[Word] = set()
        visited = 0

        start = nfa.initial
        if eps:
            start = self.reach_of(start)

        # iterative DFS; each frame holds the word and the state set after
        # every prefix of it
        stack: list[tuple[Word, tuple[frozenset, ...]]] = [((), (start,))]
        while stack:
            word, sets = stack.pop()
            visited += 1
            if visited > self.budget:
                raise OracleBudgetExceeded(f"more than {self.budget} search nodes")
            if sets[-1] & nfa.accepting:
                found.add(word)
                if len(found) > self.budget:
                    raise OracleBudgetExceeded(f"more than {self.budget} words")
            if len(word) >= self.maxlen:
                continue
            i = len(word)
            for a in reversed(self.symbols):
                ext = word + (a,)
                nxt = set(nfa.step(sets[i], a))
                alive = bool(nxt)
                for j in range(i + 1):
                    if not sets[j]:
                        continue
                    seg = ext[j:]
                    if seg in replacements:
                        nxt |= self.reach_of(sets[j])
                    if seg in prefixes:
                        alive = True
                new = frozenset(nxt)
                if eps and new:
                    new = self.reach_of(new)
                if new or alive:
                    stack.append((ext, sets + (new,)))
        return found


def _source(term: Term, symbols) -> Nfa:
    return glushkov(term, zero_as_symbol=True, symbols=symbols)


def replacement_words(hyps: Sequence[HoareHypothesis | Term], maxlen: int,
                      symbols: tuple[str, ...], budget: int = DEFAULT_BUDGET) -> frozenset[Word]:
    """Closed set of words that may replace a substring (0 and hypothesis refinements)."""
    terms = [h.a if isinstance(h, HoareHypothesis) else h for h in hyps]
    source = Sum(ZERO, *terms) if terms else ZERO
    searcher = _Searcher(_source(source, symbols), symbols, maxlen, budget)
    current: frozenset[Word] = frozenset({(ZERO_SYMBOL,)})
    while True:
        nxt = frozenset(searcher.run(current)) | current
        if nxt == current:
            return current
        current = nxt


def bounded_closure(t: Term, hyps: Sequence[HoareHypothesis | Term] = (), maxlen: int = DEFAULT_MAXLEN,
                    *, budget: int = DEFAULT_BUDGET, symbols: tuple[str, ...] | None = None,
                    replacements: frozenset[Word] | None = None) -> BoundedLanguage:
    """All refinements of words of ``t`` of length at most ``maxlen``.

    Raises OracleBudgetExceeded when the search outgrows ``budget``.
    """
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    if symbols is None:
        names = set(letters(t))
        for h in hyps:
            names |= letters(h.a if isinstance(h, HoareHypothesis) else h)
        symbols = semantic_symbols(names, KS)
    if replacements is None:
        replacements = replacement_words(hyps, maxlen, symbols, budget)
    searcher = _Searcher(_source(t, symbols), symbols, maxlen, budget)
    return BoundedLanguage(maxlen, frozenset(searcher.run(replacements)))
