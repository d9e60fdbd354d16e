"""Hoare-hypothesis elimination for Kleene semirings.

Given a hypothesis ``a = 0`` the elimination function ``f`` maps every term to
one whose plain KS denotation already accounts for the hypothesis: a goal
``y = z`` follows from ``a = 0`` exactly when ``f(y) = f(z)`` holds in KS.

``f`` is built from the prefix and suffix transformers ``p`` and ``s`` and
from the term ``m``, which denotes everything obtainable from a word of ``a``
by repeatedly replacing a substring with a word of ``a`` or with 0.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

from .terms import (
    ONE, ZERO, Alphabet, Equation, HoareHypothesis, Letter, Prod, Star,
    Sum, Term, leq, normalize, plus, product, star, times,
)


# ---------------------------------------------------------------------------
# prefixes / suffixes
# ---------------------------------------------------------------------------

def prefixes(x: Term) -> Term:
    """``p``: 1+c on constants, distributes over +, p(xy) = px + x.py, p(x*) = x*.px."""
    return _structural(x, "p", _prefix_node)


def suffixes(x: Term) -> Term:
    """``s``: the mirror image of ``prefixes``; s(xy) = sy + sx.y, s(x*) = sx.x*."""
    return _structural(x, "s", _suffix_node)


def _structural(x: Term, tag: str, node_fn) -> Term:
    # bottom-up over the DAG so deep terms never hit the recursion limit
    from .terms import subterms

    memo = x.memo()
    if tag in memo:
        return memo[tag]
    for node in subterms(x, lambda n: tag in n.memo()):
        node.memo()[tag] = node_fn(node, lambda c: c.memo()[tag])
    return memo[tag]


def _prefix_node(x: Term, p) -> Term:
    match x:
        case Sum(operands):
            return plus(*(p(o) for o in operands))
        case Prod(left, right):
            return plus(p(left), times(left, p(right)))
        case Star(body):
            return times(x, p(body))
        case _:
            return plus(ONE, x)


def _suffix_node(x: Term, s) -> Term:
    match x:
        case Sum(operands):
            return plus(*(s(o) for o in operands))
        case Prod(left, right):
            return plus(s(right), times(s(left), right))
        case Star(body):
            return times(s(body), x)
        case _:
            return plus(ONE, x)


def reverse(x: Term) -> Term:
    """Mirror image: swaps the factors of every product and changes nothing
    else, so reverse(reverse(x)) is x itself."""
    memo = x.memo()
    if "rev" in memo:
        return memo["rev"]
    from .terms import subterms

    for node in subterms(x, lambda n: "rev" in n.memo()):
        nm = node.memo()
        match node:
            case Sum(operands):
                r = Sum(*(o.memo()["rev"] for o in operands))
            case Prod(left, right):
                r = Prod(right.memo()["rev"], left.memo()["rev"])
            case Star(body):
                r = Star(body.memo()["rev"])
            case _:
                r = node
        nm["rev"] = r
    return memo["rev"]


def build_l(a: Term) -> Term:
    """l = (pa)*.a.(sa)*"""
    a = normalize(a)
    return product(star(prefixes(a)), a, star(suffixes(a)))


def build_m(a: Term) -> Term:
    """m = l.(p(s(a)).l)*"""
    a = normalize(a)
    l = build_l(a)
    return times(l, star(times(prefixes(suffixes(a)), l)))


# ---------------------------------------------------------------------------
# f and g
# ---------------------------------------------------------------------------

class EliminationContext:
    """Holds the hypothesis term, its ``m`` and the memo for ``f``/``g``.

    The memo is guarded by a lock so one context may be shared by threads.
    """

    def __init__(self, a: Term):
        self.a = normalize(a)
        self.l = build_l(self.a)
        self.m = build_m(self.a)
        self.one_m = plus(ONE, self.m)
        self._f: dict[Term, Term] = {}
        self._g: dict[Term, Term] = {}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"EliminationContext(a={self.a})"

    def f(self, x: Term) -> Term:
        with self._lock:
            if x not in self._f:
                from .terms import subterms

                for node in subterms(x, self._f.__contains__):
                    self._f[node] = self._f_node(node)
            return self._f[x]

    def g(self, x: Term) -> Term:
        with self._lock:
            if x not in self._g:
                self._g[x] = self._g_of(self.f(x))
            return self._g[x]

    def _g_of(self, fx: Term) -> Term:
        # g x = fx + p(fx).m.(p(s(fx)).m)*.s(fx)
        m = self.m
        loop = star(times(prefixes(suffixes(fx)), m))
        return plus(fx, product(prefixes(fx), m, loop, suffixes(fx)))

    def _f_node(self, x: Term) -> Term:
        f = self._f
        m = self.m
        match x:
            case Sum(operands):
                return plus(*(f[o] for o in operands))
            case Prod(left, right):
                fy, fz = f[left], f[right]
                return plus(times(fy, fz), product(prefixes(fy), m, suffixes(fz)))
            case Star(body):
                if body not in self._g:
                    self._g[body] = self._g_of(f[body])
                return star(self._g[body])
            case _:
                return product(self.one_m, plus(x, m), self.one_m)


def f_transform(x: Term, ctx: EliminationContext) -> Term:
    return ctx.f(x)


def g_transform(x: Term, ctx: EliminationContext) -> Term:
    return ctx.g(x)


def combine_hypotheses(hyps: Sequence[HoareHypothesis | Term]) -> Term:
    """a1 + ... + ak for hypotheses a1 = 0, ..., ak = 0."""
    if not hyps:
        raise ValueError("at least one hypothesis is required")
    terms = [h.a if isinstance(h, HoareHypothesis) else h for h in hyps]
    return plus(*(normalize(t) for t in terms))


# ---------------------------------------------------------------------------
# eliminations as values
# ---------------------------------------------------------------------------

class Elimination:
    """A term transformer, extended pointwise to equations."""

    def apply(self, t: Term) -> Term:
        raise NotImplementedError

    def __call__(self, t: Term) -> Term:
        return self.apply(t)


@dataclass(eq=False)
class KsHoare(Elimination):
    ctx: EliminationContext

    @classmethod
    def of(cls, a: Term) -> KsHoare:
        return cls(EliminationContext(a))

    def apply(self, t):
        return self.ctx.f(t)


@dataclass(eq=False)
class KaHoare(Elimination):
    """f(u) = S*.a.S* + u, S the sum of all letters."""

    a: Term
    alphabet: Alphabet

    def __post_init__(self):
        self.a = normalize(self.a)
        sigma = plus(*(Letter(x) for x in self.alphabet)) if len(self.alphabet) else ZERO
        self.top = star(sigma)
        self.absorbing = product(self.top, self.a, self.top)

    def apply(self, t):
        return plus(self.absorbing, normalize(t))


@dataclass(eq=False)
class Composed(Elimination):
    """Apply ``first`` then ``second``."""

    first: Elimination
    second: Elimination

    def apply(self, t):
        return self.second.apply(self.first.apply(t))


def eliminate(e: Elimination, eq: Equation) -> Equation:
    return Equation(e.apply(eq.lhs), e.apply(eq.rhs))


# ---------------------------------------------------------------------------
# obligation instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Obligation:
    source: str
    equation: Equation
    # the equation is only claimed when every premise holds
    premises: tuple[Equation, ...] = ()
    # inequalities are stored as x+y = y; ``relation`` keeps the display form
    relation: str = "="

    @property
    def conditional(self) -> bool:
        return bool(self.premises)


@dataclass
class ObligationSet:
    equations: list[Obligation] = field(default_factory=list)
    conditionals: list[Obligation] = field(default_factory=list)

    def add(self, ob: Obligation) -> None:
        (self.conditionals if ob.conditional else self.equations).append(ob)

    def __iter__(self):
        yield from self.equations
        yield from self.conditionals

    def __len__(self):
        return len(self.equations) + len(self.conditionals)


def ks_axiom_instances(x: Term, y: Term, z: Term) -> list[tuple[str, Equation]]:
    """Equational KS axioms instantiated at x, y, z (raw, un-normalized sides)."""
    return [
        ("plus-assoc", Equation(Sum(Sum(x, y), z), Sum(x, Sum(y, z)))),
        ("plus-comm", Equation(Sum(x, y), Sum(y, x))),
        ("plus-idem", Equation(Sum(x, x), x)),
        ("zero-unit", Equation(Sum(ZERO, x), x)),
        ("times-assoc", Equation(Prod(x, Prod(y, z)), Prod(Prod(x, y), z))),
        ("one-left", Equation(Prod(ONE, x), x)),
        ("one-right", Equation(Prod(x, ONE), x)),
        ("distrib-left", Equation(Prod(x, Sum(y, z)), Sum(Prod(x, y), Prod(x, z)))),
        ("distrib-right", Equation(Prod(Sum(x, y), z), Sum(Prod(x, z), Prod(y, z)))),
        ("star-unfold", Equation(Star(x), Sum(ONE, Sum(x, Prod(Star(x), Prod(x, Star(x))))))),
    ]


def star_induction_instances(x: Term, y: Term) -> list[tuple[str, Equation, Equation]]:
    """(name, hypothesis, conclusion) for both star-induction rules."""
    return [
        ("star-ind-right", leq(Prod(x, y), x), Equation(Prod(x, Star(y)), x)),
        ("star-ind-left", leq(Prod(x, y), y), Equation(Prod(Star(x), y), y)),
    ]


def obligation_instances(ctx: EliminationContext, samples: Sequence[Term]) -> ObligationSet:
    """Ground instances of what ``f`` must satisfy, over the given sample terms.

    * every KS axiom with both sides f-transformed (star induction as
      conditionals whose hypothesis is itself f-transformed);
    * f(a) = f(0) (the hypothesis is respected);
    * the lemma suite about p, s, l, m, f and g, for each sample x.
    """
    from .lemmas import lemma_statements

    f = ctx.f
    out = ObligationSet()
    samples = [normalize(s) for s in samples] or [ONE]
    n = len(samples)
    for i, x in enumerate(samples):
        y = samples[(i + 1) % n]
        z = samples[(i + 2) % n]
        for name, eq in ks_axiom_instances(x, y, z):
            out.add(Obligation(f"axiom:{name}", eq.map(f)))
        for name, hyp, concl in star_induction_instances(x, y):
            out.add(Obligation(f"axiom:{name}", concl.map(f), (hyp.map(f),)))
        for ob in lemma_statements(ctx, x):
            out.add(ob)
    out.add(Obligation("hypothesis", Equation(f(ctx.a), f(ZERO))))
    return out


def composition_obligation(first: KsHoare, later: Sequence[Term]) -> list[Obligation]:
    """For staged elimination: each later hypothesis b = 0 must entail f(b) = f(0)."""
    return [Obligation("composition", Equation(first.ctx.f(b), first.ctx.f(ZERO)),
                       relation="=") for b in later]
