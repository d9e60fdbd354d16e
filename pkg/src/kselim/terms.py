"""Kleene-semiring terms: hash-consed syntax trees, parsing, printing and
the KS-valid normal form.

Every constructor interns its result, so two structurally equal terms are
the same Python object.  Equality and hashing are therefore by identity,
which keeps memo tables cheap even when transformed terms are exponentially
large as trees but small as DAGs.
"""

from __future__ import annotations

import hashlib
import re
import sys
import weakref
from dataclasses import dataclass

sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))

__all__ = [
    "Term", "Zero", "One", "Letter", "Sum", "Prod", "Star",
    "ZERO", "ONE", "Alphabet", "Equation", "HoareHypothesis", "Problem",
    "ParseError", "parse_term", "parse_equation", "render_term", "normalize",
    "plus", "times", "star", "product", "size", "dag_size", "letters", "leq",
    "subterms",
]

_RANK = {"Zero": 0, "One": 1, "Letter": 2, "Sum": 3, "Prod": 4, "Star": 5}
_table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()


def _digest(*parts: bytes) -> bytes:
    return hashlib.blake2b(b"\x00".join(parts), digest_size=16).digest()


class Term:
    __slots__ = ("digest", "tree_size", "order", "_cache", "__weakref__")

    def __new__(cls, *args):
        key = cls._key(*args)
        self = _table.get(key)
        if self is None:
            self = object.__new__(cls)
            self._init(*key[1:])
            self._cache = None
            self.order = self.sort_key()
            _table[key] = self
        return self

    # identity semantics: interning makes structural and object equality agree
    __eq__ = object.__eq__
    __hash__ = object.__hash__

    def memo(self) -> dict:
        if self._cache is None:
            self._cache = {}
        return self._cache

    def sort_key(self) -> tuple:
        return (_RANK[type(self).__name__], self.digest)

    def __lt__(self, other: Term) -> bool:
        return self.order < other.order

    def __repr__(self) -> str:
        if self.tree_size > 200:
            return f"<{type(self).__name__} size={self.tree_size}>"
        return f"Term({render_term(self)!r})"

    def __str__(self) -> str:
        return render_term(self)

    def __reduce__(self):
        return (parse_term, (render_term(self),))

    @property
    def children(self) -> tuple[Term, ...]:
        return ()


class Zero(Term):
    __slots__ = ()

    @staticmethod
    def _key():
        return ("0",)

    def _init(self):
        self.digest = _digest(b"0")
        self.tree_size = 1

    def sort_key(self):
        return (0, "")


class One(Term):
    __slots__ = ()

    @staticmethod
    def _key():
        return ("1",)

    def _init(self):
        self.digest = _digest(b"1")
        self.tree_size = 1

    def sort_key(self):
        return (1, "")


class Letter(Term):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    @staticmethod
    def _key(name: str):
        if not _LETTER_RE.fullmatch(name):
            raise ValueError(f"invalid letter name {name!r}")
        return ("L", name)

    def _init(self, name):
        self.name = name
        self.digest = _digest(b"L", name.encode())
        self.tree_size = 1

    def sort_key(self):
        return (2, self.name)


class Sum(Term):
    """n-ary sum; operands are kept in the order given (see normalize)."""

    __slots__ = ("operands",)
    __match_args__ = ("operands",)

    @staticmethod
    def _key(*operands: Term):
        if len(operands) == 1 and isinstance(operands[0], (tuple, list)):
            operands = tuple(operands[0])
        if len(operands) < 2:
            raise ValueError("Sum needs at least two operands")
        return ("+",) + tuple(operands)

    def _init(self, *operands):
        self.operands = operands
        self.digest = _digest(b"+", *(o.digest for o in operands))
        self.tree_size = 1 + sum(o.tree_size for o in operands)

    @property
    def children(self):
        return self.operands


class Prod(Term):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    @staticmethod
    def _key(left: Term, right: Term):
        return (";", left, right)

    def _init(self, left, right):
        self.left = left
        self.right = right
        self.digest = _digest(b";", left.digest, right.digest)
        self.tree_size = 1 + left.tree_size + right.tree_size

    @property
    def children(self):
        return (self.left, self.right)


class Star(Term):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    @staticmethod
    def _key(body: Term):
        return ("*", body)

    def _init(self, body):
        self.body = body
        self.digest = _digest(b"*", body.digest)
        self.tree_size = 1 + body.tree_size

    @property
    def children(self):
        return (self.body,)


ZERO = Zero()
ONE = One()
_LETTER_RE = re.compile(r"[a-z][a-z0-9_]*")


# ---------------------------------------------------------------------------
# problem-level containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(dict.fromkeys(self.letters))
        for name in letters:
            if not _LETTER_RE.fullmatch(name):
                raise ValueError(f"invalid letter name {name!r}")
        object.__setattr__(self, "letters", letters)

    def __contains__(self, name: str) -> bool:
        return name in self.letters

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def covering(self, *terms: Term) -> Alphabet:
        """This alphabet extended by any letters occurring in `terms`."""
        extra = sorted(set().union(*(letters(t) for t in terms)) - set(self.letters))
        return Alphabet(self.letters + tuple(extra)) if extra else self


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{render_term(self.lhs)} = {render_term(self.rhs)}"

    def map(self, fn) -> Equation:
        return Equation(fn(self.lhs), fn(self.rhs))


@dataclass(frozen=True)
class HoareHypothesis:
    """The hypothesis ``a = 0``."""

    a: Term

    def __str__(self):
        return f"{render_term(self.a)} = 0"


@dataclass(frozen=True)
class Problem:
    alphabet: Alphabet
    hypotheses: tuple[HoareHypothesis, ...]
    goal: Equation

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        used = set(letters(self.goal.lhs)) | letters(self.goal.rhs)
        for h in self.hypotheses:
            used |= letters(h.a)
        missing = used - set(self.alphabet.letters)
        if missing:
            raise ValueError(f"undeclared letters: {', '.join(sorted(missing))}")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:([a-z][a-z0-9_]*)|([01])|([+;.*()=]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", text, pos + stripped)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("letter", m.group(1), start))
        elif m.group(2):
            tokens.append(("const", m.group(2), start))
        else:
            tok = m.group(3)
            tokens.append(("op", ";" if tok == "." else tok, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None):
        self.text = text
        self.alphabet = alphabet
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse_sum(self) -> Term:
        ops = [self.parse_prod()]
        while self.peek()[:2] == ("op", "+"):
            self.advance()
            ops.append(self.parse_prod())
        return ops[0] if len(ops) == 1 else Sum(*ops)

    def parse_prod(self) -> Term:
        factors = [self.parse_star()]
        while self.peek()[:2] == ("op", ";"):
            self.advance()
            factors.append(self.parse_star())
        result = factors[-1]
        for f in reversed(factors[:-1]):
            result = Prod(f, result)
        return result

    def parse_star(self) -> Term:
        t = self.parse_atom()
        while self.peek()[:2] == ("op", "*"):
            self.advance()
            t = Star(t)
        return t

    def parse_atom(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "const":
            self.advance()
            return ZERO if val == "0" else ONE
        if kind == "letter":
            if self.alphabet is not None and val not in self.alphabet:
                raise ParseError(f"undeclared letter {val!r}", self.text, pos)
            self.advance()
            return Letter(val)
        if (kind, val) == ("op", "("):
            self.advance()
            t = self.parse_sum()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.advance()
            return t
        self.error("expected a term" if kind != "end" else "unexpected end of input")


def parse_term(text: str, alphabet: Alphabet | None = None) -> Term:
    """Parse ``text``; products are ``;`` (or ``.``), no implicit juxtaposition."""
    p = _Parser(text, alphabet)
    t = p.parse_sum()
    if p.peek()[0] != "end":
        p.error(f"unexpected token {p.peek()[1]!r}")
    return t


def parse_equation(text: str, alphabet: Alphabet | None = None) -> Equation:
    p = _Parser(text, alphabet)
    lhs = p.parse_sum()
    if p.peek()[:2] != ("op", "="):
        p.error("expected '='")
    p.advance()
    rhs = p.parse_sum()
    if p.peek()[0] != "end":
        p.error(f"unexpected token {p.peek()[1]!r}")
    return Equation(lhs, rhs)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def render_term(t: Term) -> str:
    out: list[str] = []
    _render(t, 0, out)
    return "".join(out)


def _render(t: Term, prec: int, out: list[str]) -> None:
    match t:
        case Zero():
            out.append("0")
        case One():
            out.append("1")
        case Letter(name):
            out.append(name)
        case Sum(operands):
            if prec > 0:
                out.append("(")
            for i, o in enumerate(operands):
                if i:
                    out.append("+")
                _render(o, 1, out)
            if prec > 0:
                out.append(")")
        case Prod(left, right):
            if prec > 1:
                out.append("(")
            # left operand is parenthesised when it is itself a product so
            # that the tree shape survives a round trip
            _render(left, 2, out)
            out.append(";")
            _render(right, 1, out)
            if prec > 1:
                out.append(")")
        case Star(body):
            _render(body, 2, out)
            out.append("*")


# ---------------------------------------------------------------------------
# normal form: + is assoc/comm/idempotent with unit 0, ; is assoc with unit 1
# ---------------------------------------------------------------------------

def plus(*terms: Term) -> Term:
    """Normalized sum of already-normalized terms."""
    ops: set[Term] = set()
    for t in terms:
        if isinstance(t, Sum):
            ops.update(t.operands)
        else:
            ops.add(t)
    if len(ops) > 1:
        ops.discard(ZERO)
    if not ops:
        return ZERO
    if len(ops) == 1:
        return next(iter(ops))
    return Sum(*sorted(ops, key=_order))


def _order(t: Term):
    return t.order


def times(x: Term, y: Term) -> Term:
    """Normalized product of already-normalized terms (right-nested)."""
    if x is ONE:
        return y
    if y is ONE:
        return x
    if isinstance(x, Prod):
        return Prod(x.left, times(x.right, y))
    return Prod(x, y)


def star(x: Term) -> Term:
    return Star(x)


def product(*terms: Term) -> Term:
    result = ONE
    for t in reversed(terms):
        result = times(t, result)
    return result


def normalize(t: Term) -> Term:
    """KS-valid normal form; never rewrites ``0;x`` or ``x;0``."""
    memo = t.memo()
    cached = memo.get("norm")
    if cached is not None:
        return cached
    match t:
        case Sum(operands):
            result = plus(*(normalize(o) for o in operands))
        case Prod(left, right):
            result = times(normalize(left), normalize(right))
        case Star(body):
            result = star(normalize(body))
        case _:
            result = t
    memo["norm"] = result
    if result is not t:
        result.memo()["norm"] = result
    return result


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def size(t: Term) -> int:
    """Node count of the syntax tree (shared subterms counted each time)."""
    return t.tree_size


def subterms(t: Term, done=None) -> list[Term]:
    """Distinct subterms, children before parents.

    Nodes for which ``done(node)`` is true are skipped together with
    everything below them.
    """
    if done is not None and done(t):
        return []
    seen: set[Term] = set()
    order: list[Term] = []
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        for c in reversed(node.children):
            if c not in seen and (done is None or not done(c)):
                stack.append((c, False))
    return order


def dag_size(t: Term) -> int:
    return len(subterms(t))


def letters(t: Term) -> frozenset[str]:
    memo = t.memo()
    cached = memo.get("letters")
    if cached is None:
        if isinstance(t, Letter):
            cached = frozenset((t.name,))
        else:
            cached = frozenset().union(*(letters(c) for c in t.children))
        memo["letters"] = cached
    return cached


def leq(x: Term, y: Term) -> Equation:
    """``x <= y`` as the equation ``x + y = y``."""
    return Equation(Sum(x, y), y)
