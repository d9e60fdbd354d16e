"""Finite relational models of Kleene semirings.

States ``0..n-1``; state 0 plays the role of the nontermination state.  Every
relation relates that state to itself and to nothing else.  The constant 0
denotes the identity restricted to that state, which makes ``0;x = 0`` hold
while ``x;0 = 0`` generally fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..terms import Letter, One, Prod, Star, Sum, Term, Zero, subterms

BOTTOM = 0


@dataclass(frozen=True, eq=False)
class RelationalModel:
    carrier_size: int
    interpretation: Mapping[str, np.ndarray]

    def __post_init__(self):
        for name, rel in self.interpretation.items():
            if rel.shape != (self.carrier_size, self.carrier_size):
                raise ValueError(f"relation for {name!r} has shape {rel.shape}")
            if not respects_bottom(rel):
                raise ValueError(f"relation for {name!r} does not fix the bottom state")

    def identity(self) -> np.ndarray:
        return np.eye(self.carrier_size, dtype=bool)

    def zero(self) -> np.ndarray:
        z = np.zeros((self.carrier_size, self.carrier_size), dtype=bool)
        z[BOTTOM, BOTTOM] = True
        return z


def respects_bottom(rel: np.ndarray) -> bool:
    row = rel[BOTTOM]
    return bool(row[BOTTOM]) and not row[1:].any()


def compose(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    return (r.astype(np.uint8) @ s.astype(np.uint8)) > 0


def closure(r: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure."""
    result = np.eye(r.shape[0], dtype=bool) | r
    while True:
        nxt = result | compose(result, result)
        if (nxt == result).all():
            return result
        result = nxt


def eval_relational(t: Term, model: RelationalModel) -> np.ndarray:
    values: dict[Term, np.ndarray] = {}
    for node in subterms(t):
        match node:
            case Zero():
                v = model.zero()
            case One():
                v = model.identity()
            case Letter(name):
                v = model.interpretation[name]
            case Sum(operands):
                v = np.logical_or.reduce([values[o] for o in operands])
            case Prod(left, right):
                v = compose(values[left], values[right])
            case Star(body):
                v = closure(values[body])
        values[node] = v
    return values[t]


def random_relational_models(alphabet: Iterable[str], carrier_size: int, count: int,
                             seed: int = 0, *, density: float = 0.4,
                             zero_bias: float = 0.0) -> list[RelationalModel]:
    """``count`` random models; deterministic per seed.

    With ``zero_bias`` each letter is, with that probability, interpreted as
    the 0 relation, which makes Hoare hypotheses hold more often.
    """
    if carrier_size < 2:
        raise ValueError("carrier_size must be at least 2")
    names = list(alphabet)
    rng = np.random.default_rng(seed)
    models = []
    for _ in range(count):
        interp = {}
        for name in names:
            rel = rng.random((carrier_size, carrier_size)) < density
            if rng.random() < zero_bias:
                rel[:] = False
            rel[BOTTOM, :] = False
            rel[BOTTOM, BOTTOM] = True
            interp[name] = rel
        models.append(RelationalModel(carrier_size, interp))
    return models


def satisfies(model: RelationalModel, lhs: Term, rhs: Term) -> bool:
    return bool((eval_relational(lhs, model) == eval_relational(rhs, model)).all())
