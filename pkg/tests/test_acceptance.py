"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""
import io
import json
import random
import time
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from kselim.cli import main
from kselim.decide import (
    crosscheck, decide_ka, decide_ks, decide_staged, decide_under_hoare, decide_under_hoare_ka,
)
from kselim.gen import random_problem, random_term
from kselim.lemmas import CONDITIONAL, lemma_names
from kselim.semantics import (
    KS, Outcome, bounded_closure, dfa_of_term, glushkov, semantic_symbols, words_up_to,
)
from kselim.terms import (
    ONE, ZERO, Alphabet, Equation, HoareHypothesis, Problem, Prod, Star, Sum, parse_term,
)

BASELINE = Path(__file__).parent / "data" / "bench_baseline.jsonl"
SEED = 20240601


@pytest.fixture
def criterion():
    """Record and print one line per criterion, whatever the outcome."""
    state = {}

    def record(number, title, ok, detail):
        state.update(number=number, title=title, ok=ok, detail=detail)

    yield record
    if state:
        status = "PASS" if state["ok"] else "FAIL"
        line = f"criterion {state['number']} [{status}] {state['title']}: {state['detail']}"
        print(line)
        ACCEPTANCE_LINES.append(line)


def run_cli(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out, io.StringIO())
    return code, out.getvalue()


def test_1_worked_example(criterion):
    start = time.perf_counter()
    x = parse_term("b;c")
    regex = parse_term("0*;(0+0;c+b;0+b;0*;c);0*")
    verdict = decide_ks(x, regex)
    names = semantic_symbols({"b", "c"}, KS)
    closed = words_up_to(dfa_of_term(x, KS, names), 6)
    # the regex read with 0 as a plain symbol, without closing its language
    literal = words_up_to(glushkov(regex, True, names), 6)
    oracle = bounded_closure(x, [], 6, symbols=names).words
    elapsed = time.perf_counter() - start
    ok = verdict.is_equal and closed == literal == oracle and elapsed < 1.0
    criterion(1, "worked example", ok,
              f"verdict={verdict.outcome.value}, {len(oracle)} words up to length 6 agree="
              f"{closed == literal == oracle}, {elapsed:.3f}s (< 1s)")
    assert ok


def test_2_lemma_suite(criterion):
    start = time.perf_counter()
    code, out = run_cli("lemmas", "--samples", 50, "--seed", SEED, "--size", 10,
                        "--hyp-size", 8, "--json")
    elapsed = time.perf_counter() - start
    records = [json.loads(line) for line in out.splitlines()]
    names = lemma_names()
    applicable = {n: sum(r["status"] == "pass" for r in records if r["lemma"] == n) for n in names}
    failures = [r for r in records if r["status"] == "fail"]
    thin = {n: applicable[n] for n in CONDITIONAL if applicable[n] < 10}
    ok = (code == 0 and not failures and not thin and len(names) >= 20
          and len(records) == 50 * len(names) and elapsed <= 600)
    cond = ", ".join(f"{n}={applicable[n]}" for n in sorted(CONDITIONAL))
    criterion(2, "lemma suite", ok,
              f"{len(names)} lemmas x 50 samples, {len(failures)} failures, "
              f"applicable conditional samples: {cond}; {elapsed:.1f}s (<= 600s)")
    assert not failures, failures[:3]
    assert ok


def test_3_soundness_triangulation(criterion):
    rng = random.Random(SEED)
    start = time.perf_counter()
    disagreements, conclusive, refuted = [], 0, 0
    for i in range(200):
        p = random_problem(rng, n_hyps=1, hyp_size=8, goal_size=8)
        r = crosscheck(p.goal.lhs, p.goal.rhs, p.hypotheses, 6, n_models=50, carrier_max=4,
                       seed=i, alphabet=p.alphabet.letters)
        conclusive += not r.partial
        refuted += r.relational.outcome is Outcome.UNEQUAL
        if not r.consistent or r.language_mismatch:
            disagreements.append((str(p.goal), str(p.hypotheses[0]),
                                  r.disagreements + r.language_mismatch))
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed <= 900
    criterion(3, "elimination soundness triangulation", ok,
              f"200 problems, {len(disagreements)} disagreements, oracle conclusive on "
              f"{conclusive}, relationally refuted {refuted}; {elapsed:.1f}s (<= 900s)")
    assert not disagreements, disagreements[:3]
    assert ok


def test_4_annihilation_regressions(criterion):
    start = time.perf_counter()
    P = parse_term
    b_zero = Problem(Alphabet(("b", "c")), (HoareHypothesis(P("b")),), Equation(P("b;c"), ZERO))
    checks = {
        "ks 0;b vs 0 -> unequal '0b'": decide_ks(P("0;b"), ZERO).witness == ("0", "b"),
        "ks b;0 vs b -> unequal 'b'": decide_ks(P("b;0"), P("b")).witness == ("b",),
        "ka 0;b = 0": decide_ka(P("0;b"), ZERO).is_equal,
        "ka b;0 = 0": decide_ka(P("b;0"), ZERO).is_equal,
        "ka b;0 vs b -> unequal": not decide_ka(P("b;0"), P("b")).is_equal,
        "ks under b=0: b;c vs 0 unequal": decide_under_hoare(b_zero).verdict.outcome
        is Outcome.UNEQUAL,
        "ka under b=0: b;c = 0": decide_under_hoare_ka(b_zero).verdict.is_equal,
    }
    elapsed = time.perf_counter() - start
    bad = [k for k, v in checks.items() if not v]
    ok = not bad and elapsed < 1.0
    criterion(4, "annihilation regressions", ok,
              f"{len(checks) - len(bad)}/{len(checks)} exact checks"
              + (f" (failed: {bad})" if bad else "") + f", {elapsed:.3f}s (< 1s)")
    assert ok


def test_5_zero_free_fragment(criterion):
    rng = random.Random(SEED + 5)
    start = time.perf_counter()
    mismatches, equal = [], 0
    for _ in range(300):
        x = random_term(rng, max_size=12, constants=False)
        # a fair share of equal pairs: derive the second side from the first
        y = random_term(rng, max_size=12, constants=False) if rng.random() < 0.5 else _reshape(x, rng)
        ks, ka = decide_ks(x, y), decide_ka(x, y)
        equal += ks.is_equal
        if ks.is_equal != ka.is_equal:
            mismatches.append((str(x), str(y)))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed <= 300
    criterion(5, "zero-free fragment", ok,
              f"300 pairs ({equal} equal), {len(mismatches)} verdict mismatches; "
              f"{elapsed:.1f}s (<= 300s)")
    assert not mismatches, mismatches[:3]
    assert ok


def _reshape(x, rng):
    """A term KA-equal to ``x`` but written differently."""
    forms = [Sum(x, x), Prod(ONE, x), Sum(Prod(x, ONE), x),
             Star(Star(x)) if isinstance(x, Star) else Prod(x, ONE)]
    return rng.choice(forms)


def test_6_composition_coherence(criterion):
    rng = random.Random(SEED + 6)
    start = time.perf_counter()
    differ, unchecked, reordered = [], 0, 0
    for _ in range(100):
        p = random_problem(rng, n_hyps=2, hyp_size=6, goal_size=8)
        summed = decide_under_hoare(p)
        staged = decide_staged(p)
        unchecked += not staged.obligations_hold
        reordered += staged.metrics["order"] != [0, 1]
        if summed.verdict.outcome is not staged.verdict.outcome:
            differ.append((str(p.goal), [str(h) for h in p.hypotheses]))
    elapsed = time.perf_counter() - start
    ok = not differ and elapsed <= 600
    criterion(6, "composition coherence", ok,
              f"100 two-hypothesis problems, {len(differ)} verdict differences, "
              f"{reordered} needed the reverse order, {unchecked} without a valid order; "
              f"{elapsed:.1f}s (<= 600s)")
    assert not differ, differ[:3]
    assert ok


def test_7_bench_envelope(criterion):
    code, out = run_cli("bench", "--json")
    records = [json.loads(line) for line in out.splitlines()]
    baseline = [json.loads(line) for line in BASELINE.read_text().splitlines()]
    slow = [r["problem"] for r in records if r["seconds"] > 10]
    drift = [r["problem"] for r, base in zip(records, baseline)
             if {k: v for k, v in r.items() if k != "seconds"} != base]
    growth = sorted((r["goal_size"], r["f_lhs_size"] + r["f_rhs_size"]) for r in records)
    worst = max(r["seconds"] for r in records)
    ok = (code == 0 and len(records) == 50 == len(baseline) and not slow and not drift)
    criterion(7, "bench envelope", ok,
              f"50 problems, slowest {worst:.3f}s (<= 10s), {len(drift)} drifted from the "
              f"recorded baseline; |f(goal)| from {growth[0][1]} at goal size {growth[0][0]} "
              f"to {growth[-1][1]} at goal size {growth[-1][0]}")
    assert not slow and not drift, (slow, drift)
    assert ok
