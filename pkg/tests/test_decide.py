import pytest
from hypothesis import given

from conftest import terms
from kselim.decide import (
    composition_checks, crosscheck, decide_ka, decide_ks, decide_leq_ks, decide_problem,
    decide_staged, decide_under_hoare, decide_under_hoare_ka, ks_accepts, staged_elimination,
    witness_sides,
)
from kselim.semantics import Outcome
from kselim.terms import (
    ZERO, Alphabet, Equation, HoareHypothesis, Problem, normalize, parse_term,
)

P = parse_term
AB = Alphabet(("b", "c"))


def problem(hyps, lhs, rhs, alphabet=AB):
    return Problem(alphabet, tuple(HoareHypothesis(P(h)) for h in hyps), Equation(P(lhs), P(rhs)))


class TestDecideKs:
    def test_axiom_instance(self):
        assert decide_ks(P("(b+c)+b"), P("b+(c+b)")).is_equal

    def test_no_left_annihilation(self):
        v = decide_ks(P("0;b"), ZERO)
        assert v.outcome is Outcome.UNEQUAL and v.witness == ("0", "b")

    def test_no_right_annihilation(self):
        assert decide_ks(P("b;0"), P("b")).witness == ("b",)

    def test_worked_example(self):
        # with 0 read as the constant, the regex denotes the same closed language
        assert decide_ks(P("b;c"), P("0*;(0+0;c+b;0+b;0*;c);0*")).is_equal

    def test_zero_is_least(self):
        assert decide_leq_ks(ZERO, P("1")).is_equal
        assert decide_leq_ks(P("b"), P("b+c")).is_equal
        assert decide_leq_ks(P("b+c"), P("b")).witness == ("c",)

    def test_alphabet_does_not_change_verdicts(self):
        assert decide_ks(P("b*"), P("b*;b*"), ("b", "c", "d")).is_equal

    def test_accepts(self):
        assert ks_accepts(P("b;c"), ("0", "c"))
        assert not ks_accepts(P("b;c"), ("c",))

    @given(terms())
    def test_reflexive(self, x):
        assert decide_ks(x, x).is_equal

    @given(terms(), terms())
    def test_symmetric(self, x, y):
        assert decide_ks(x, y).is_equal == decide_ks(y, x).is_equal

    @given(terms(), terms(), terms())
    def test_transitive(self, x, y, z):
        if decide_ks(x, y).is_equal and decide_ks(y, z).is_equal:
            assert decide_ks(x, z).is_equal

    @given(terms(), terms())
    def test_witness_separates(self, x, y):
        v = decide_ks(x, y)
        if not v.is_equal:
            lhs, rhs = witness_sides(x, y, v.witness)
            assert lhs != rhs

    @given(terms(zero=False), terms(zero=False))
    def test_zero_free_fragment_matches_ka(self, x, y):
        assert decide_ks(x, y).is_equal == decide_ka(x, y).is_equal


class TestDecideKa:
    def test_examples(self):
        assert decide_ka(P("0;b"), ZERO).is_equal
        assert decide_ka(P("b*;b*"), P("b*")).is_equal
        assert decide_ka(P("b"), P("c")).witness == ("b",)


class TestUnderHoare:
    @pytest.mark.parametrize("hyps,lhs,rhs,equal", [
        (["b"], "b", "0", True),
        (["b"], "b;c", "0;c", True),
        (["b"], "b;c", "0", False),
        (["b", "c"], "b+c", "0", True),
        (["b;b"], "b;b;b", "0;b", True),
        (["b;c"], "(b;c)*", "1+0", True),
    ])
    def test_examples(self, hyps, lhs, rhs, equal):
        assert decide_under_hoare(problem(hyps, lhs, rhs)).verdict.is_equal is equal

    def test_witness_for_unequal(self):
        r = decide_under_hoare(problem(["b"], "b;c", "0"))
        # shortest-then-least: the zero symbol sorts before every letter
        assert r.verdict.witness == ("0", "c")
        for word in [("0", "c"), ("b", "c")]:
            lhs, rhs = witness_sides(r.transformed.lhs, r.transformed.rhs, word)
            assert lhs and not rhs

    def test_report(self):
        r = decide_under_hoare(problem(["b"], "b;c", "0;c"))
        assert r.theory == "ks-hoare"
        assert r.hypothesis is P("b")
        for key in ("a_size", "m_size", "f_lhs_size", "f_rhs_size", "m_states", "lhs_states"):
            assert key in r.metrics
        rec = r.to_record()
        assert rec["verdict"] == "equal" and rec["witness"] is None

    def test_needs_hypotheses(self):
        with pytest.raises(ValueError):
            decide_under_hoare(problem([], "b", "b"))

    @given(terms(), terms(), terms(max_leaves=4))
    def test_hypothesis_monotonicity(self, x, y, a):
        if decide_ks(x, y).is_equal:
            p = Problem(AB, (HoareHypothesis(a),), Equation(x, y))
            assert decide_under_hoare(p).verdict.is_equal

    @given(terms(max_leaves=4), terms())
    def test_hypothesis_itself_holds(self, a, x):
        p = Problem(AB, (HoareHypothesis(a),), Equation(a, ZERO))
        assert decide_under_hoare(p).verdict.is_equal


class TestKaBaseline:
    def test_examples(self):
        assert decide_under_hoare_ka(problem(["b"], "b", "0")).verdict.is_equal
        assert decide_under_hoare_ka(problem(["b"], "b;c", "0")).verdict.is_equal
        r = decide_under_hoare_ka(problem(["b"], "c", "1"))
        assert r.verdict.witness == ()
        assert r.theory == "ka-hoare"

    def test_contrast_with_ks(self):
        p = problem(["b"], "b;c", "0")
        assert not decide_under_hoare(p).verdict.is_equal
        assert decide_under_hoare_ka(p).verdict.is_equal


class TestDecideProblem:
    def test_dispatch(self):
        assert decide_problem(problem([], "0;b", "0"), "ks").verdict.witness == ("0", "b")
        assert decide_problem(problem([], "0;b", "0"), "ka").verdict.is_equal
        assert decide_problem(problem(["b"], "b", "0"), "ka").theory == "ka-hoare"
        with pytest.raises(ValueError):
            decide_problem(problem([], "b", "b"), "kat")


class TestStaged:
    def test_first_hypothesis_first(self):
        e, stages = staged_elimination([HoareHypothesis(P("b")), HoareHypothesis(P("c"))])
        t = P("b;c")
        assert e.apply(t) is stages[1].apply(stages[0].apply(t))

    def test_agrees_with_sum(self):
        p = problem(["b", "c"], "b+c", "0")
        r = decide_staged(p)
        assert r.verdict.is_equal and r.obligations_hold
        assert r.metrics["order"] == [0, 1]
        assert [name for name, _ in r.obligations] == ["stage1-respects-hyp2"]

    def test_invalid_order_is_replaced(self):
        # eliminating c** = 0 first does not respect 0;b* = 0
        p = problem(["c**", "0;b*"], "(c;1)*", "0*;b")
        stages = staged_elimination(p.hypotheses)[1]
        assert not all(v.is_equal for _, v in composition_checks(stages))
        r = decide_staged(p)
        assert r.metrics["order"] == [1, 0]
        assert r.obligations_hold
        assert r.verdict.outcome is decide_under_hoare(p).verdict.outcome


class TestCrosscheck:
    def test_annihilation(self):
        r = crosscheck(P("0;b"), ZERO, (), 4)
        assert r.consistent and r.decider.witness == ("0", "b")
        assert r.oracle.witness == ("0", "b")

    def test_identical_terms(self):
        r = crosscheck(P("b*"), P("b*"), (), 4)
        assert r.consistent
        assert r.decider.is_equal and r.oracle.is_equal and r.relational.is_equal

    def test_axiom_pair(self):
        r = crosscheck(P("b;(c+b)"), P("b;c+b;b"), (), 3)
        assert r.consistent and r.oracle.is_equal

    def test_relational_refutation(self):
        r = crosscheck(P("b"), P("c"), (), 3, n_models=20)
        assert r.relational.outcome is Outcome.UNEQUAL
        assert r.consistent

    def test_hypotheses_filter_models(self):
        r = crosscheck(P("b;c"), P("0;c"), (P("b"),), 4, n_models=30)
        assert r.consistent
        assert 0 < r.models_applicable <= r.models_checked

    def test_budget_gives_partial_report(self):
        r = crosscheck(P("(b+c)*"), P("(b+c)*"), (), 8, budget=20)
        assert r.partial and r.consistent

    def test_record(self):
        rec = crosscheck(P("0;b"), ZERO, (), 3).to_record()
        assert rec["decider"] == {"outcome": "unequal", "witness": "0b"}
        assert rec["consistent"] is True

    @given(terms(max_leaves=4), terms(max_leaves=5), terms(max_leaves=5))
    def test_no_disagreements(self, a, x, y):
        r = crosscheck(x, y, (a,), 4, n_models=12, carrier_max=3)
        assert r.consistent, r.disagreements


def test_normalized_goal_gives_same_verdict():
    p = problem(["b;0"], "(b;c)*;b", "b;(c;b)*")
    q = Problem(p.alphabet, p.hypotheses, Equation(normalize(p.goal.lhs), normalize(p.goal.rhs)))
    assert decide_under_hoare(p).verdict == decide_under_hoare(q).verdict
