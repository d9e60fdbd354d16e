"""Regenerate the shipped benchmark corpus (deterministic)."""

import argparse
from pathlib import Path

from kselim.cli import format_problem
from kselim.gen import DEFAULT_LETTERS, derive_rng, random_term
from kselim.terms import Alphabet, Equation, HoareHypothesis, Problem, normalize, parse_equation, parse_term

HAND_WRITTEN = [
    ("b", "b = 0"),
    ("b", "b;c = 0;c"),
    ("b", "b;c = 0"),
    ("b c", "b+c = 0"),
    ("b", "c;b;c = c;0;c"),
    ("b;c", "(b;c)* = 1 + 0"),
    ("b*;c", "c = 0"),
    ("c;c", "(c;c;c)* = c*"),
    ("0;b", "b;0;b = b;0"),
    ("b;b", "(b+c)* = (b+c)*;0;(b+c)*"),
]


def build(seed: int, count: int, goal_size: int, hyp_size: int):
    letters = DEFAULT_LETTERS
    problems = []
    for hyps, goal in HAND_WRITTEN:
        hyp_terms = [parse_term(h) for h in hyps.split(" ")]
        problems.append(Problem(Alphabet(letters), tuple(map(HoareHypothesis, hyp_terms)),
                                parse_equation(goal)))
    i = 0
    while len(problems) < count:
        rng = derive_rng(seed, "corpus", i)
        n_hyps = 1 if i % 4 else 2
        hyps = tuple(HoareHypothesis(random_term(rng, letters, hyp_size)) for _ in range(n_hyps))
        # sizes spread evenly so the growth curve covers the whole range
        target = 4 + (i * 26) // (count - len(HAND_WRITTEN))
        lhs = random_term(rng, letters, target, exact=True)
        # every fifth goal is an equal pair, exercising a full equivalence check
        rhs = normalize(lhs) if i % 5 == 0 else random_term(rng, letters, target)
        goal = Equation(lhs, rhs)
        problems.append(Problem(Alphabet(letters), hyps, goal))
        i += 1
    return problems


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/kselim/data/corpus"))
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--count", type=int, default=50)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("*.ks"):
        old.unlink()
    for k, prob in enumerate(build(args.seed, args.count, 30, 6)):
        (out / f"p{k:02d}.ks").write_text(format_problem(prob), encoding="utf-8")


if __name__ == "__main__":
    main()
