"""Decide Kleene-semiring equalities and eliminate Hoare hypotheses ``a = 0``."""

from .decide import (
    CrosscheckReport, EliminationReport, crosscheck, decide_ka, decide_leq_ks, decide_problem,
    decide_staged, decide_under_hoare, decide_under_hoare_ka, decide_ks,
)
from .elimination import (
    Composed, Elimination, EliminationContext, KaHoare, KsHoare, build_l, build_m,
    combine_hypotheses, eliminate, f_transform, g_transform, obligation_instances, prefixes,
    suffixes,
)
from .lemmas import LemmaResult, check_lemmas, lemma_names
from .semantics import (
    Outcome, Verdict, bounded_closure, dfa_of_term, nfa_of_term, nfa_of_term_final,
    random_relational_models, saturate_zero,
)
from .terms import (
    ONE, ZERO, Alphabet, Equation, HoareHypothesis, ParseError, Problem, Term, normalize,
    parse_equation, parse_term, render_term,
)

__all__ = [
    "CrosscheckReport", "EliminationReport", "crosscheck", "decide_ka", "decide_leq_ks",
    "decide_problem", "decide_staged", "decide_under_hoare", "decide_under_hoare_ka",
    "decide_ks", "Composed", "Elimination", "EliminationContext", "KaHoare", "KsHoare",
    "build_l", "build_m", "combine_hypotheses", "eliminate", "f_transform", "g_transform",
    "obligation_instances", "prefixes", "suffixes", "LemmaResult", "check_lemmas",
    "lemma_names", "Outcome", "Verdict", "bounded_closure", "dfa_of_term", "nfa_of_term",
    "nfa_of_term_final", "random_relational_models", "saturate_zero", "ONE", "ZERO",
    "Alphabet", "Equation", "HoareHypothesis", "ParseError", "Problem", "Term", "normalize",
    "parse_equation", "parse_term", "render_term",
]
