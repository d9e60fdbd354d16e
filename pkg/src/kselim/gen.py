"""Seeded random term and problem generation."""

from __future__ import annotations

import random
from typing import Sequence

from .terms import (
    ONE, ZERO, Alphabet, Equation, HoareHypothesis, Letter, Problem, Prod,
    Star, Sum, Term,
)

DEFAULT_LETTERS = ("b", "c", "d")


def random_term(rng: random.Random, letters: Sequence[str] = DEFAULT_LETTERS,
                max_size: int = 8, *, star_depth: int = 2, constants: bool = True,
                exact: bool = False) -> Term:
    """A raw term with at most ``max_size`` nodes (exactly, if ``exact``)."""
    target = max_size if exact else rng.randint(1, max_size)
    return _grow(rng, tuple(letters), target, star_depth, constants)


def _leaf(rng, letters, constants) -> Term:
    if constants and rng.random() < 0.3:
        return ZERO if rng.random() < 0.5 else ONE
    return Letter(rng.choice(letters))


def _grow(rng, letters, n, star_depth, constants) -> Term:
    if n <= 1:
        return _leaf(rng, letters, constants)
    if n == 2:
        if star_depth > 0:
            return Star(_leaf(rng, letters, constants))
        return _leaf(rng, letters, constants)
    choices = ["+", ";", ";"]
    if star_depth > 0:
        choices.append("*")
    op = rng.choice(choices)
    if op == "*":
        return Star(_grow(rng, letters, n - 1, star_depth - 1, constants))
    k = rng.randint(1, n - 2)
    left = _grow(rng, letters, k, star_depth, constants)
    right = _grow(rng, letters, n - 1 - k, star_depth, constants)
    return Sum(left, right) if op == "+" else Prod(left, right)


def random_problem(rng: random.Random, letters: Sequence[str] = DEFAULT_LETTERS,
                   n_hyps: int = 1, hyp_size: int = 8, goal_size: int = 8,
                   *, star_depth: int = 2) -> Problem:
    hyps = tuple(HoareHypothesis(random_term(rng, letters, hyp_size, star_depth=star_depth))
                 for _ in range(n_hyps))
    goal = Equation(random_term(rng, letters, goal_size, star_depth=star_depth),
                    random_term(rng, letters, goal_size, star_depth=star_depth))
    return Problem(Alphabet(tuple(letters)), hyps, goal)


def derive_rng(seed: int, *labels) -> random.Random:
    """Independent deterministic stream per (seed, labels)."""
    return random.Random(f"{seed}:" + ":".join(map(str, labels)))
