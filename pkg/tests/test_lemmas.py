import pytest

from kselim.decide import decide_ks
from kselim.elimination import EliminationContext, prefixes
from kselim.lemmas import (
    CONDITIONAL, FAIL, LEMMAS, PASS, SKIP, SampleConfig, check_lemmas, lemma_names,
    lemma_statements, run_sample, summarize,
)
from kselim.terms import Prod, Star, normalize, parse_term, plus, star, times

P = parse_term

SUITE = ["1xpx", "ppx", "pssp", "pxz", "pShort", "pAlg-consequence", "mpsam", "pl", "plm",
         "pmm", "mpsm", "xmf", "fact", "main", "l0", "pg", "pgxmsgx", "pfxm", "hg-axiom-cases",
         "hg-star-induction-cases", "fxx", "hg1", "mfproof-consequence"]


def holds(lemma, a, **binding):
    ctx = EliminationContext(P(a))
    bound = {k: P(v) for k, v in binding.items()}
    return [decide_ks(st.conclusion.lhs, st.conclusion.rhs).is_equal
            for st in LEMMAS[lemma].statements(ctx, bound)]


def test_registry_is_complete():
    assert lemma_names() == SUITE
    assert CONDITIONAL <= set(SUITE)


def test_unknown_name():
    with pytest.raises(ValueError, match="bogus"):
        check_lemmas(["bogus"], samples=1)


def test_pl_for_a_letter():
    ctx = EliminationContext(P("b"))
    (st,) = LEMMAS["pl"].statements(ctx, {})
    assert st.conclusion.rhs is plus(star(P("1+b")), times(ctx.l, normalize(P("1+b"))))
    assert decide_ks(st.conclusion.lhs, st.conclusion.rhs).is_equal


def test_hg1():
    assert holds("hg1", "b;b") == [True]


def test_fxx():
    (r,) = [r for r in check_lemmas(["fxx"], samples=1, seed=3)]
    assert r.status == PASS
    ctx = EliminationContext(P("b"))
    (st,) = LEMMAS["fxx"].statements(ctx, {"x": P("c;c")})
    assert st.under is ctx.a


def test_pmm():
    assert holds("pmm", "b;c+0") == [True, True]


def test_pshort_literal_reading_fails():
    # (px)*.px = px is false already for x = b; (px)*.px = (px)* is what holds
    px = prefixes(P("b"))
    assert not decide_ks(Prod(Star(px), px), px).is_equal
    assert decide_ks(Prod(Star(px), px), Star(px)).is_equal


def test_suite_detects_a_wrong_m():
    ctx = EliminationContext(P("b;c"))
    ctx.m = ctx.l
    verdicts = [decide_ks(st.conclusion.lhs, st.conclusion.rhs).is_equal
                for name in ("mpsm", "pmm") for st in LEMMAS[name].statements(ctx, {})]
    assert not all(verdicts)


def test_suite_detects_a_wrong_prefix_function(monkeypatch):
    import kselim.lemmas as lemmas

    def bad_p(x):
        return prefixes(x) if x.tree_size > 1 else x

    monkeypatch.setattr(lemmas, "p", bad_p)
    assert not all(holds("1xpx", "b", x="c"))


def test_conditional_premises_are_checked():
    # l0 needs x <= m; for x = c with a = b that fails
    ctx = EliminationContext(P("b"))
    (st,) = LEMMAS["l0"].statements(ctx, {"x": P("c")})
    prem = st.premises[0]
    assert not decide_ks(prem.lhs, prem.rhs).is_equal
    (st,) = LEMMAS["l0"].statements(ctx, {"x": P("b;b")})
    assert decide_ks(st.premises[0].lhs, st.premises[0].rhs).is_equal
    assert decide_ks(st.conclusion.lhs, st.conclusion.rhs).is_equal


def test_deterministic_per_seed():
    first = [r.to_record() for r in check_lemmas(["main", "pg"], samples=3, seed=11)]
    again = [r.to_record() for r in check_lemmas(["pg", "main"], samples=3, seed=11)]
    assert first == again
    other = [r.to_record() for r in check_lemmas(["main", "pg"], samples=3, seed=12)]
    assert first != other


def test_workers_do_not_change_results():
    serial = [r.to_record() for r in check_lemmas(["xmf", "l0"], samples=3, seed=5)]
    parallel = [r.to_record() for r in check_lemmas(["xmf", "l0"], samples=3, seed=5, jobs=2)]
    assert serial == parallel


def test_run_sample_is_order_independent():
    cfg = SampleConfig()
    assert run_sample("fact", 4, 9, cfg).to_record() == run_sample("fact", 4, 9, cfg).to_record()


def test_every_lemma_on_a_few_samples():
    results = check_lemmas(samples=3, seed=1, size=8, hyp_size=6)
    summary = summarize(results)
    assert set(summary) == set(SUITE)
    assert all(sm.failed == 0 for sm in summary.values()), {
        n: [f.to_record() for f in sm.failures] for n, sm in summary.items() if sm.failed}
    assert {r.status for r in results} <= {PASS, SKIP}


def test_failure_record_has_witness():
    ctx = EliminationContext(P("b"))
    ctx.m = P("b")
    from kselim.lemmas import _conclude
    r = _conclude(LEMMAS["pmm"], 0, ctx, {}, LEMMAS["pmm"].statements(ctx, {}), SampleConfig())
    assert r.status == FAIL and r.witness is not None
    assert "witness" in r.to_record()


def test_lemma_statements_for_obligations():
    ctx = EliminationContext(P("b"))
    obs = lemma_statements(ctx, P("c"))
    sources = {o.source.split(":")[1] for o in obs}
    assert sources == set(SUITE)
    fact = [o for o in obs if o.source.startswith("lemma:fact")][0]
    assert len(fact.premises) == 2
