"""Automata for terms.

KS mode builds the closed-language denotation bottom-up over the term DAG:
each node's automaton is formed from its children's minimal DFAs, 0-saturated,
determinized and minimized, and cached on the (interned) term.  KA mode is the
classical regular-expression reading where 0 is the empty language.
"""

from __future__ import annotations

from typing import Iterable

from ..terms import Letter, One, Prod, Star, Sum, Term, Zero, letters, subterms
from .automata import (
    ZERO_SYMBOL, Dfa, Nfa, concat_nfa, determinize, empty_dfa, minimize,
    saturate_zero, single_word_dfa, star_nfa, union_nfa,
)

KS = "ks"
KA = "ka"


def semantic_symbols(names: Iterable[str], mode: str = KS) -> tuple[str, ...]:
    names = tuple(sorted(set(names)))
    return (ZERO_SYMBOL,) + names if mode == KS else names


# Minimal DFAs are canonical, so each distinct language is stored once and
# operations are memoized on language ids.  Distinct languages stay few even
# when the terms producing them are large.
_languages: dict[tuple, Dfa] = {}
_ids: dict[int, int] = {}
_ops: dict[tuple, Dfa] = {}


def _intern(d: Dfa) -> Dfa:
    key = (d.symbols, d.delta, d.accepting, d.saturated)
    found = _languages.get(key)
    if found is None:
        found = _languages[key] = d
        _ids[id(d)] = len(_ids)
    return found


def language_id(d: Dfa) -> int:
    return _ids[id(_intern(d))]


def clear_caches() -> None:
    _languages.clear()
    _ids.clear()
    _ops.clear()


def _close(nfa: Nfa, mode: str) -> Dfa:
    if mode == KS:
        nfa = saturate_zero(nfa)
    return _intern(minimize(determinize(nfa)))


def _apply(op: str, mode: str, *args: Dfa) -> Dfa:
    key = (op, mode) + tuple(_ids[id(a)] for a in args)
    if op == "+":
        key = (op, mode) + tuple(sorted(key[2:]))
    result = _ops.get(key)
    if result is None:
        build = {"+": union_nfa, ";": concat_nfa, "*": star_nfa}[op]
        result = _ops[key] = _close(build(*args), mode)
    return result


def dfa_of_term(t: Term, mode: str = KS, symbols: tuple[str, ...] | None = None) -> Dfa:
    """Minimal DFA of ``t``'s language; compositional and cached per subterm."""
    if symbols is None:
        symbols = semantic_symbols(letters(t), mode)
    key = ("dfa", mode, symbols)
    cached = t.memo().get(key)
    if cached is not None:
        return cached
    for node in subterms(t, lambda n: key in n.memo()):
        node.memo()[key] = _build_node(node, mode, symbols, key)
    return t.memo()[key]


def _build_node(node: Term, mode: str, symbols, key) -> Dfa:
    ks = mode == KS
    match node:
        case Zero():
            if ks:
                return _close(single_word_dfa(symbols, (ZERO_SYMBOL,)).as_nfa(), mode)
            return _intern(minimize(empty_dfa(symbols)))
        case One():
            return _close(single_word_dfa(symbols, ()).as_nfa(), mode)
        case Letter(name):
            if name not in symbols:
                raise ValueError(f"letter {name!r} outside the semantic alphabet {symbols}")
            return _close(single_word_dfa(symbols, (name,)).as_nfa(), mode)
        case Sum(operands):
            acc = operands[0].memo()[key]
            for o in operands[1:]:
                acc = _apply("+", mode, acc, o.memo()[key])
            return acc
        case Prod(left, right):
            return _apply(";", mode, left.memo()[key], right.memo()[key])
        case Star(body):
            return _apply("*", mode, body.memo()[key])
    raise TypeError(f"not a term: {node!r}")


def glushkov(t: Term, zero_as_symbol: bool = False,
             symbols: tuple[str, ...] | None = None) -> Nfa:
    """Position automaton of ``t`` read as a classical regular expression.

    With ``zero_as_symbol`` the constant 0 is an ordinary symbol
    (``ZERO_SYMBOL``); otherwise it denotes the empty language.
    """
    if symbols is None:
        symbols = semantic_symbols(letters(t), KS if zero_as_symbol else KA)
    labels: list[str] = []
    follow: list[set[int]] = []

    def walk(node: Term):
        # returns (nullable, first, last)
        match node:
            case Zero():
                if not zero_as_symbol:
                    return False, frozenset(), frozenset()
                return leaf(ZERO_SYMBOL)
            case One():
                return True, frozenset(), frozenset()
            case Letter(name):
                return leaf(name)
            case Sum(operands):
                parts = [walk(o) for o in operands]
                return (any(p[0] for p in parts),
                        frozenset().union(*(p[1] for p in parts)),
                        frozenset().union(*(p[2] for p in parts)))
            case Prod(left, right):
                n1, f1, l1 = walk(left)
                n2, f2, l2 = walk(right)
                for p in l1:
                    follow[p] |= f2
                return (n1 and n2, f1 | f2 if n1 else f1, l1 | l2 if n2 else l2)
            case Star(body):
                n, f, last = walk(body)
                for p in last:
                    follow[p] |= f
                return True, f, last
        raise TypeError(f"not a term: {node!r}")

    def leaf(label):
        labels.append(label)
        follow.append(set())
        p = len(labels) - 1
        return False, frozenset((p,)), frozenset((p,))

    nullable, first, last = walk(t)
    # state 0 is the initial state, position i is state i + 1
    delta: list[dict[str, set[int]]] = [dict() for _ in range(len(labels) + 1)]
    for p in first:
        delta[0].setdefault(labels[p], set()).add(p + 1)
    for p, targets in enumerate(follow):
        for r in targets:
            delta[p + 1].setdefault(labels[r], set()).add(r + 1)
    accepting = {p + 1 for p in last} | ({0} if nullable else set())
    frozen = tuple({a: frozenset(v) for a, v in row.items()} for row in delta)
    return Nfa(symbols, frozen, frozenset((0,)), frozenset(accepting))


def nfa_of_term(t: Term, mode: str = KS, symbols: tuple[str, ...] | None = None) -> Nfa:
    """KS: compositional saturated automaton.  KA: position automaton."""
    if mode == KS:
        return dfa_of_term(t, KS, symbols).as_nfa()
    if mode == KA:
        return glushkov(t, False, symbols)
    raise ValueError(f"unknown mode {mode!r}")


def nfa_of_term_final(t: Term, symbols: tuple[str, ...] | None = None) -> Nfa:
    """Whole-term position automaton with 0 as a symbol, saturated once at the end."""
    return saturate_zero(glushkov(t, True, symbols))
