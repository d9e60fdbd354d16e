"""Executable models of Kleene semirings: saturated automata, bounded
refinement languages and finite relational models."""

from .automata import (
    ZERO_SYMBOL, Dfa, Nfa, Outcome, Verdict, determinize, equivalent, included,
    is_saturated, minimize, parse_word, render_word, saturate_zero, words_up_to,
)
from .bounded import (
    BoundedLanguage, OracleBudgetExceeded, bounded_closure, replacement_words,
)
from .construct import KA, KS, dfa_of_term, glushkov, nfa_of_term, nfa_of_term_final, semantic_symbols
from .relational import (
    RelationalModel, eval_relational, random_relational_models, respects_bottom, satisfies,
)

__all__ = [
    "ZERO_SYMBOL", "Dfa", "Nfa", "Outcome", "Verdict", "determinize", "equivalent",
    "included", "is_saturated", "minimize", "parse_word", "render_word", "saturate_zero",
    "words_up_to", "BoundedLanguage", "OracleBudgetExceeded", "bounded_closure",
    "replacement_words", "KA", "KS", "dfa_of_term", "glushkov", "nfa_of_term",
    "nfa_of_term_final", "semantic_symbols", "RelationalModel", "eval_relational",
    "random_relational_models", "respects_bottom", "satisfies",
]
