"""Decision pipelines: plain KS and KA equality, KS under Hoare hypotheses
(summed or staged), the KA baseline, and oracle cross-checking."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .elimination import (
    Composed, Elimination, EliminationContext, KaHoare, KsHoare, combine_hypotheses,
    eliminate,
)
from .semantics.automata import Outcome, Verdict, equivalent, included, render_word
from .semantics.bounded import (
    DEFAULT_BUDGET, OracleBudgetExceeded, bounded_closure, replacement_words,
)
from .semantics.construct import KA, KS, dfa_of_term, glushkov, semantic_symbols
from .semantics.relational import eval_relational, random_relational_models
from .terms import (
    ZERO, Equation, HoareHypothesis, Problem, Term, dag_size, letters,
    normalize, render_term, size,
)


def _names(*terms: Term, alphabet: Iterable[str] = ()) -> set[str]:
    names = set(alphabet)
    for t in terms:
        names |= letters(t)
    return names


def decide_ks(x: Term, y: Term, alphabet: Iterable[str] = ()) -> Verdict:
    """KS equality via 0-saturated automata; unequal verdicts carry a shortest witness."""
    symbols = semantic_symbols(_names(x, y, alphabet=alphabet), KS)
    return equivalent(dfa_of_term(x, KS, symbols), dfa_of_term(y, KS, symbols))


def decide_leq_ks(x: Term, y: Term, alphabet: Iterable[str] = ()) -> Verdict:
    """x <= y in KS; the witness (if any) is a word of x missing from y."""
    symbols = semantic_symbols(_names(x, y, alphabet=alphabet), KS)
    return included(dfa_of_term(x, KS, symbols), dfa_of_term(y, KS, symbols))


def decide_ka(x: Term, y: Term, alphabet: Iterable[str] = ()) -> Verdict:
    """Classical regular-expression equivalence (0 is the empty language)."""
    symbols = semantic_symbols(_names(x, y, alphabet=alphabet), KA)
    return equivalent(glushkov(x, False, symbols), glushkov(y, False, symbols))


def ks_accepts(t: Term, word: Sequence[str], alphabet: Iterable[str] = ()) -> bool:
    symbols = semantic_symbols(_names(t, alphabet=alphabet) | set(word) - {"0"}, KS)
    return dfa_of_term(t, KS, symbols).accepts(word)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class EliminationReport:
    theory: str
    goal: Equation
    transformed: Equation
    hypothesis: Term | None
    verdict: Verdict
    seconds: float
    metrics: dict = field(default_factory=dict)
    obligations: list[tuple[str, Verdict]] = field(default_factory=list)

    @property
    def obligations_hold(self) -> bool:
        return all(v.is_equal for _, v in self.obligations)

    def to_record(self) -> dict:
        rec = {
            "theory": self.theory,
            "goal": str(self.goal),
            "hypothesis": render_term(self.hypothesis) if self.hypothesis is not None else None,
            "verdict": self.verdict.outcome.value,
            "witness": render_word(self.verdict.witness) if self.verdict.witness is not None else None,
            "seconds": round(self.seconds, 6),
        }
        rec.update(self.metrics)
        if self.obligations:
            rec["obligations_hold"] = self.obligations_hold
        return rec


def _plain_report(theory: str, problem: Problem) -> EliminationReport:
    start = time.perf_counter()
    goal = problem.goal
    if theory == KS:
        symbols = semantic_symbols(_names(goal.lhs, goal.rhs, alphabet=problem.alphabet), KS)
        dl, dr = dfa_of_term(goal.lhs, KS, symbols), dfa_of_term(goal.rhs, KS, symbols)
        verdict = equivalent(dl, dr)
        states = {"lhs_states": dl.n_states, "rhs_states": dr.n_states}
    else:
        verdict = decide_ka(goal.lhs, goal.rhs, problem.alphabet)
        states = {}
    metrics = {"lhs_size": size(goal.lhs), "rhs_size": size(goal.rhs), **states}
    return EliminationReport(theory, goal, goal, None, verdict,
                             time.perf_counter() - start, metrics)


def decide_under_hoare(problem: Problem) -> EliminationReport:
    """Sum the hypotheses into one ``a = 0``, transform the goal with ``f``, decide in KS."""
    if not problem.hypotheses:
        raise ValueError("decide_under_hoare needs at least one hypothesis")
    start = time.perf_counter()
    a = combine_hypotheses(problem.hypotheses)
    ctx = EliminationContext(a)
    goal = problem.goal
    transformed = eliminate(KsHoare(ctx), Equation(normalize(goal.lhs), normalize(goal.rhs)))
    symbols = semantic_symbols(_names(goal.lhs, goal.rhs, a, alphabet=problem.alphabet), KS)
    dl = dfa_of_term(transformed.lhs, KS, symbols)
    dr = dfa_of_term(transformed.rhs, KS, symbols)
    verdict = equivalent(dl, dr)
    metrics = {
        "a_size": size(a),
        "m_size": size(ctx.m),
        "m_dag": dag_size(ctx.m),
        "f_lhs_size": size(transformed.lhs),
        "f_rhs_size": size(transformed.rhs),
        "f_lhs_dag": dag_size(transformed.lhs),
        "f_rhs_dag": dag_size(transformed.rhs),
        "m_states": dfa_of_term(ctx.m, KS, symbols).n_states,
        "lhs_states": dl.n_states,
        "rhs_states": dr.n_states,
    }
    return EliminationReport("ks-hoare", goal, transformed, a, verdict,
                             time.perf_counter() - start, metrics)


def decide_under_hoare_ka(problem: Problem) -> EliminationReport:
    """KA baseline: u -> S*.a.S* + u, decided as regular expressions."""
    if not problem.hypotheses:
        raise ValueError("decide_under_hoare_ka needs at least one hypothesis")
    start = time.perf_counter()
    a = combine_hypotheses(problem.hypotheses)
    alphabet = problem.alphabet.covering(a, problem.goal.lhs, problem.goal.rhs)
    transformed = eliminate(KaHoare(a, alphabet), problem.goal)
    verdict = decide_ka(transformed.lhs, transformed.rhs, alphabet)
    metrics = {"a_size": size(a), "f_lhs_size": size(transformed.lhs),
               "f_rhs_size": size(transformed.rhs)}
    return EliminationReport("ka-hoare", problem.goal, transformed, a, verdict,
                             time.perf_counter() - start, metrics)


def staged_elimination(hyps: Sequence[HoareHypothesis | Term]) -> tuple[Elimination, list[KsHoare]]:
    """Composed eliminations, first hypothesis eliminated first."""
    stages = [KsHoare.of(h.a if isinstance(h, HoareHypothesis) else h) for h in hyps]
    if not stages:
        raise ValueError("at least one hypothesis is required")
    e: Elimination = stages[0]
    for nxt in stages[1:]:
        e = Composed(e, nxt)
    return e, stages


def _chain(stages: Sequence[KsHoare], t: Term) -> Term:
    for st in stages:
        t = st.apply(t)
    return t


def composition_checks(stages: Sequence[KsHoare], alphabet: Iterable[str] = ()) -> list[tuple[str, Verdict]]:
    """Each stage must respect the hypotheses eliminated after it.

    For stage i and every later hypothesis ``b = 0`` the obligation is
    ``f_i(b) = f_i(0)`` under the later hypotheses, decided by pushing both
    sides through the remaining stages.
    """
    out = []
    for i, st in enumerate(stages):
        rest = stages[i + 1:]
        for j, later in enumerate(rest, start=i + 1):
            lhs = _chain(rest, st.apply(later.ctx.a))
            rhs = _chain(rest, st.apply(ZERO))
            out.append((f"stage{i + 1}-respects-hyp{j + 1}",
                        decide_ks(lhs, rhs, alphabet)))
    return out


def decide_staged(problem: Problem, *, max_orders: int = 24) -> EliminationReport:
    """Eliminate the hypotheses one at a time, composing the transformers.

    A composition is only sound when every stage respects the hypotheses
    eliminated after it.  Orders are tried in lexicographic permutation order
    (the given order first) and the first one whose composition checks all
    hold is used.  When none does, the given order is reported with its failed
    checks attached so callers can see the verdict is not trustworthy.
    """
    start = time.perf_counter()
    goal = problem.goal
    hyps = list(problem.hypotheses)
    names = _names(goal.lhs, goal.rhs, *(h.a for h in hyps), alphabet=problem.alphabet)
    chosen = None
    for order in itertools.islice(itertools.permutations(range(len(hyps))), max_orders):
        e, stages = staged_elimination([hyps[i] for i in order])
        obligations = composition_checks(stages, names)
        if chosen is None:
            chosen = (order, e, obligations)
        if all(v.is_equal for _, v in obligations):
            chosen = (order, e, obligations)
            break
    order, e, obligations = chosen
    transformed = eliminate(e, Equation(normalize(goal.lhs), normalize(goal.rhs)))
    verdict = decide_ks(transformed.lhs, transformed.rhs, names)
    metrics = {"order": list(order),
               "f_lhs_size": size(transformed.lhs), "f_rhs_size": size(transformed.rhs),
               "f_lhs_dag": dag_size(transformed.lhs), "f_rhs_dag": dag_size(transformed.rhs)}
    return EliminationReport("ks-staged", goal, transformed,
                             combine_hypotheses(problem.hypotheses), verdict,
                             time.perf_counter() - start, metrics, obligations)


def decide_problem(problem: Problem, theory: str = KS) -> EliminationReport:
    if theory not in (KS, KA):
        raise ValueError(f"unknown theory {theory!r}")
    if not problem.hypotheses:
        return _plain_report(theory, problem)
    if theory == KS:
        return decide_under_hoare(problem)
    return decide_under_hoare_ka(problem)


def witness_sides(x: Term, y: Term, word: Sequence[str], alphabet: Iterable[str] = ()) -> tuple[bool, bool]:
    """Membership of ``word`` in the KS languages of x and y."""
    symbols = semantic_symbols(_names(x, y, alphabet=alphabet), KS)
    return (dfa_of_term(x, KS, symbols).accepts(word),
            dfa_of_term(y, KS, symbols).accepts(word))


# ---------------------------------------------------------------------------
# cross-checking against the independent models
# ---------------------------------------------------------------------------

@dataclass
class CrosscheckReport:
    lhs: Term
    rhs: Term
    hypotheses: tuple[Term, ...]
    maxlen: int
    decider: Verdict
    oracle: Verdict
    relational: Verdict
    models_checked: int = 0
    models_applicable: int = 0
    language_mismatch: list[str] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.disagreements

    @property
    def partial(self) -> bool:
        return self.oracle.outcome is Outcome.INCONCLUSIVE

    def to_record(self) -> dict:
        def v(verdict):
            rec = {"outcome": verdict.outcome.value}
            if verdict.witness is not None:
                rec["witness"] = render_word(verdict.witness)
            return rec
        return {
            "lhs": render_term(self.lhs), "rhs": render_term(self.rhs),
            "hypotheses": [render_term(a) for a in self.hypotheses],
            "maxlen": self.maxlen, "decider": v(self.decider), "oracle": v(self.oracle),
            "relational": v(self.relational), "models_checked": self.models_checked,
            "models_applicable": self.models_applicable,
            "disagreements": self.disagreements, "consistent": self.consistent,
        }


def crosscheck(x: Term, y: Term, hyps: Sequence[HoareHypothesis | Term] = (), maxlen: int = 6,
               *, n_models: int = 50, carrier_max: int = 4, seed: int = 0,
               budget: int = DEFAULT_BUDGET, alphabet: Iterable[str] = (),
               zero_bias: float = 0.5) -> CrosscheckReport:
    """Compare the decider with the bounded refinement oracle and relational models.

    The oracle is exact up to ``maxlen``: any unequal verdict with a witness of
    that length must show up in it, and an equal verdict must see identical
    word sets.  Relational models that satisfy the hypotheses can only refute.
    """
    hyp_terms = tuple(normalize(h.a if isinstance(h, HoareHypothesis) else h) for h in hyps)
    names = _names(x, y, *hyp_terms, alphabet=alphabet)
    symbols = semantic_symbols(names, KS)
    if hyp_terms:
        ctx = EliminationContext(combine_hypotheses(hyp_terms))
        fx, fy = ctx.f(normalize(x)), ctx.f(normalize(y))
    else:
        fx, fy = normalize(x), normalize(y)
    dx, dy = dfa_of_term(fx, KS, symbols), dfa_of_term(fy, KS, symbols)
    decider = equivalent(dx, dy)

    report = CrosscheckReport(x, y, hyp_terms, maxlen, decider,
                              Verdict.inconclusive(maxlen), Verdict.equal())

    # bounded refinement oracle
    try:
        repl = replacement_words(hyp_terms, maxlen, symbols, budget)
        bx = bounded_closure(x, hyp_terms, maxlen, budget=budget, symbols=symbols, replacements=repl)
        by = bounded_closure(y, hyp_terms, maxlen, budget=budget, symbols=symbols, replacements=repl)
    except OracleBudgetExceeded:
        bx = by = None
    if bx is not None:
        diff = bx.shortest_difference(by)
        report.oracle = Verdict.equal() if diff is None else Verdict.unequal(diff)
        for side, bl, d in (("lhs", bx, dx), ("rhs", by, dy)):
            for w in sorted(bl.words, key=lambda w: (len(w), w)):
                if not d.accepts(w):
                    report.language_mismatch.append(f"{side}: oracle word {render_word(w)!r} rejected by automaton")
                    break
        if decider.is_equal and diff is not None:
            report.disagreements.append(
                f"decider equal but oracle separates on {render_word(diff)!r}")
        if not decider.is_equal:
            w = decider.witness
            if len(w) <= maxlen:
                if diff is None:
                    report.disagreements.append(
                        f"decider witness {render_word(w)!r} within bound but oracle sees no difference")
                elif (w in bx.words) == (w in by.words):
                    report.disagreements.append(
                        f"decider witness {render_word(w)!r} not separated by oracle")
                elif len(diff) != len(w):
                    report.disagreements.append(
                        f"shortest witnesses differ in length: decider {render_word(w)!r}, oracle {render_word(diff)!r}")
            elif diff is not None:
                report.disagreements.append(
                    f"oracle separates on {render_word(diff)!r} shorter than decider witness")

    # relational refutation over models that satisfy every hypothesis
    rng_seed = seed
    per_size = max(1, n_models // max(1, carrier_max - 1))
    models = []
    for n in range(2, carrier_max + 1):
        models += random_relational_models(sorted(names), n, per_size, rng_seed + n,
                                           zero_bias=zero_bias if hyp_terms else 0.0)
    models = models[:n_models]
    report.models_checked = len(models)
    for k, model in enumerate(models):
        zero = model.zero()
        if any(not (eval_relational(a, model) == zero).all() for a in hyp_terms):
            continue
        report.models_applicable += 1
        if not (eval_relational(x, model) == eval_relational(y, model)).all():
            report.relational = Verdict(Outcome.UNEQUAL, bound=k)
            break
    if decider.is_equal and report.relational.outcome is Outcome.UNEQUAL:
        report.disagreements.append(
            f"decider equal but relational model #{report.relational.bound} separates")
    return report
