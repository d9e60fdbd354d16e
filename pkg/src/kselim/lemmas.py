"""Executable lemma suite for the elimination construction.

Each lemma is a statement schema over a hypothesis term ``a`` (through its
:class:`EliminationContext`) and a few sample terms.  Instantiating a schema
yields ground equations that are decided in plain KS.  Conditional lemmas
carry premises; an instance whose premises fail is recorded as skipped, and
targeted generators are used so that premises hold often enough to matter.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .elimination import (
    EliminationContext, Obligation, ks_axiom_instances, prefixes, star_induction_instances,
    suffixes,
)
from .gen import DEFAULT_LETTERS, derive_rng, random_term
from .semantics.automata import Verdict, render_word
from .terms import (
    ONE, ZERO, Equation, Prod, Star, Sum, Term, leq, normalize, plus, product, render_term,
    size, star, subterms, times,
)

p, s = prefixes, suffixes


@dataclass(frozen=True)
class Statement:
    label: str
    conclusion: Equation
    premises: tuple[Equation, ...] = ()
    # decide the conclusion in KS extended with ``under = 0``
    under: Term | None = None


@dataclass(frozen=True)
class Lemma:
    name: str
    summary: str
    variables: tuple[str, ...]
    statements: Callable[[EliminationContext, dict], list[Statement]]
    picker: Callable[[random.Random, EliminationContext, "SampleConfig"], dict]

    @property
    def conditional(self) -> bool:
        return self.name in CONDITIONAL


@dataclass(frozen=True)
class SampleConfig:
    letters: tuple[str, ...] = DEFAULT_LETTERS
    hyp_size: int = 8
    size: int = 10
    attempts: int = 12


# ---------------------------------------------------------------------------
# statement schemas
# ---------------------------------------------------------------------------

def _1xpx(ctx, b):
    x = b["x"]
    return [Statement("1+x <= px", leq(Sum(ONE, x), p(x))),
            Statement("1+x <= sx", leq(Sum(ONE, x), s(x)))]


def _ppx(ctx, b):
    x = b["x"]
    return [Statement("ppx = px", Equation(p(p(x)), p(x))),
            Statement("ssx = sx", Equation(s(s(x)), s(x)))]


def _pssp(ctx, b):
    x = b["x"]
    return [Statement("psx = spx", Equation(p(s(x)), s(p(x))))]


def _pxz(ctx, b):
    x = b["x"]
    return [Statement("px.0 = x.0", Equation(Prod(p(x), ZERO), Prod(x, ZERO))),
            Statement("0.sx = 0.x", Equation(Prod(ZERO, s(x)), Prod(ZERO, x)))]


def _pshort(ctx, b):
    x, y = b["x"], b["y"]
    px = p(x)
    return [
        Statement("(px)*.px = (px)*", Equation(Prod(Star(px), px), Star(px))),
        Statement("p(x*.y) = x*.(px+py)", Equation(p(Prod(Star(x), y)), Prod(Star(x), Sum(px, p(y))))),
        Statement("p((px)*.y) = (px)*.py", Equation(p(Prod(Star(px), y)), Prod(Star(px), p(y)))),
        Statement("p(px.y) = px.py", Equation(p(Prod(px, y)), Prod(px, p(y)))),
    ]


def _palg(ctx, b):
    x, y = b["x"], b["y"]
    prem = (Equation(x, y),)
    return [Statement("x = y => px = py", Equation(p(x), p(y)), prem),
            Statement("x = y => sx = sy", Equation(s(x), s(y)), prem)]


def _mpsam(ctx, b):
    m = ctx.m
    return [Statement("m.psa.m <= m", leq(product(m, p(s(ctx.a)), m), m))]


def _pl(ctx, b):
    a, l = ctx.a, ctx.l
    return [Statement("pl = (pa)* + l.psa", Equation(p(l), plus(star(p(a)), times(l, p(s(a))))))]


def _plm(ctx, b):
    return [Statement("pl.m = m", Equation(times(p(ctx.l), ctx.m), ctx.m))]


def _pmm(ctx, b):
    m = ctx.m
    return [Statement("pm.m = m", Equation(times(p(m), m), m)),
            Statement("m.sm = m", Equation(times(m, s(m)), m))]


def _mpsm(ctx, b):
    m = ctx.m
    return [Statement("m.psm.m <= m", leq(product(m, p(s(m)), m), m))]


def _xmf(ctx, b):
    x = b["x"]
    return [Statement("x+m <= fx", leq(Sum(x, ctx.m), ctx.f(x)))]


def _psm_bound(ctx, x):
    return plus(x, product(p(x), ctx.m, s(x)))


def _fact(ctx, b):
    x, m = b["x"], ctx.m
    fx = ctx.f(x)
    prem = (leq(x, p(s(m))), leq(fx, _psm_bound(ctx, x)))
    return [Statement("pfx.m <= px.m", leq(times(p(fx), m), times(p(x), m)), prem)]


def _main(ctx, b):
    x = b["x"]
    return [Statement("fx <= x + px.m.sx", leq(ctx.f(x), _psm_bound(ctx, x)),
                      (leq(x, p(s(ctx.m))),))]


def _l0(ctx, b):
    x = b["x"]
    return [Statement("fx = m", Equation(ctx.f(x), ctx.m), (leq(x, ctx.m),))]


def _pg(ctx, b):
    x, m = b["x"], ctx.m
    fx = ctx.f(x)
    rhs = times(p(fx), plus(p(m), star(times(m, p(s(fx))))))
    return [Statement("pgx = pfx.(pm + (m.psfx)*)", Equation(p(ctx.g(x)), rhs))]


def _pgxmsgx(ctx, b):
    gx = ctx.g(b["x"])
    return [Statement("pgx.m.sgx <= gx", leq(product(p(gx), ctx.m, s(gx)), gx))]


def _pfxm(ctx, b):
    fx = ctx.f(b["x"])
    return [Statement("pfx.m <= fx", leq(times(p(fx), ctx.m), fx)),
            Statement("m.sfx <= fx", leq(times(ctx.m, s(fx)), fx))]


def _hg_axioms(ctx, b):
    return [Statement(name, eq.map(ctx.f))
            for name, eq in ks_axiom_instances(b["x"], b["y"], b["z"])]


def _hg_star(ctx, b):
    out = []
    for name, hyp, concl in star_induction_instances(b["x"], b["y"]):
        out.append(Statement(name, concl.map(ctx.f), (hyp.map(ctx.f),)))
    return out


def _fxx(ctx, b):
    x = b["x"]
    return [Statement("fx = x given a = 0", Equation(ctx.f(x), x), under=ctx.a)]


def _hg1(ctx, b):
    return [Statement("fa = f0", Equation(ctx.f(ctx.a), ctx.f(ZERO)))]


def _mfproof(ctx, b):
    f = ctx.f
    u0, v0, u1, v1 = b["u0"], b["v0"], b["u1"], b["v1"]
    prem = (Equation(f(u0), f(v0)), Equation(f(u1), f(v1)))
    return [
        Statement("congruence +", Equation(f(Sum(u0, u1)), f(Sum(v0, v1))), prem),
        Statement("congruence .", Equation(f(Prod(u0, u1)), f(Prod(v0, v1))), prem),
        Statement("congruence *", Equation(f(Star(u0)), f(Star(v0))), prem[:1]),
    ]


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _rand(rng, cfg):
    return random_term(rng, cfg.letters, cfg.size)


def _pick_xyz(rng, ctx, cfg):
    return {"x": _rand(rng, cfg), "y": _rand(rng, cfg), "z": _rand(rng, cfg)}


def _small_pieces(ctx, roots: Iterable[Term], cap: int) -> list[Term]:
    seen = []
    for r in roots:
        for t in subterms(r):
            if size(t) <= cap and t not in seen:
                seen.append(t)
    return seen


def _combine(rng, pool: Sequence[Term], cap: int) -> Term:
    x = rng.choice(pool)
    if rng.random() < 0.5:
        y = rng.choice(pool)
        z = Prod(x, y) if rng.random() < 0.6 else Sum(x, y)
        if size(z) <= cap:
            return z
    return x


def _pick_below_psm(rng, ctx, cfg):
    # pieces of a, l and m tend to lie below psm
    roots = (ctx.a, p(s(ctx.a)), ctx.l, ctx.m)
    pool = _small_pieces(ctx, roots, cfg.size)
    if rng.random() < 0.2:
        return {"x": _rand(rng, cfg)}
    return {"x": _combine(rng, pool, cfg.size)}


def _pick_below_m(rng, ctx, cfg):
    base = [ctx.a, ZERO, Prod(ctx.a, ctx.a), Prod(ctx.a, ZERO), Prod(ZERO, ctx.a), Sum(ctx.a, ZERO)]
    roll = rng.random()
    if roll < 0.15:
        return {"x": _rand(rng, cfg)}
    if roll < 0.3:
        return {"x": ctx.m}
    x = rng.choice(base)
    if rng.random() < 0.4:
        x = Prod(x, rng.choice(base)) if rng.random() < 0.5 else Sum(x, rng.choice(base))
    return {"x": x}


def _equal_pair(rng, ctx, cfg) -> tuple[Term, Term]:
    x, y, z = (_rand(rng, cfg) for _ in range(3))
    roll = rng.random()
    if roll < 0.5:
        _, eq = rng.choice(ks_axiom_instances(x, y, z))
        return eq.lhs, eq.rhs
    if roll < 0.7:
        return x, normalize(x)
    if roll < 0.85:
        return Prod(x, Star(y)), Prod(Prod(x, Star(y)), Star(y))
    return x, y


def _pick_pair(rng, ctx, cfg):
    x, y = _equal_pair(rng, ctx, cfg)
    return {"x": x, "y": y}


def _pick_star_induction(rng, ctx, cfg):
    x, y, z = (_rand(rng, cfg) for _ in range(3))
    if rng.random() < 0.5:
        # x.y <= x when x = z.y*
        return {"x": Prod(z, Star(y)), "y": y, "z": z}
    # x.y <= y when y = x*.z
    return {"x": x, "y": Prod(Star(x), z), "z": z}


def _f_pair(rng, ctx, cfg) -> tuple[Term, Term]:
    roll = rng.random()
    x = _rand(rng, cfg)
    if roll < 0.3:
        return ctx.a, ZERO
    if roll < 0.45:
        return Prod(ctx.a, x), Prod(ZERO, x)
    if roll < 0.9:
        return _equal_pair(rng, ctx, cfg)
    return x, _rand(rng, cfg)


def _pick_congruence(rng, ctx, cfg):
    u0, v0 = _f_pair(rng, ctx, cfg)
    u1, v1 = _f_pair(rng, ctx, cfg)
    return {"u0": u0, "v0": v0, "u1": u1, "v1": v1}


def _pick_x(rng, ctx, cfg):
    return {"x": _rand(rng, cfg)}


def _pick_none(rng, ctx, cfg):
    return {}


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

CONDITIONAL = frozenset({"pAlg-consequence", "fact", "main", "l0",
                         "hg-star-induction-cases", "mfproof-consequence"})

_REGISTRY = [
    Lemma("1xpx", "1+x <= px and 1+x <= sx", ("x",), _1xpx, _pick_x),
    Lemma("ppx", "p and s are idempotent", ("x",), _ppx, _pick_x),
    Lemma("pssp", "p and s commute", ("x",), _pssp, _pick_x),
    Lemma("pxz", "px.0 = x.0 and its mirror", ("x",), _pxz, _pick_x),
    Lemma("pShort", "short identities for p over stars and products", ("x", "y"), _pshort, _pick_xyz),
    Lemma("pAlg-consequence", "p and s respect KS equality", ("x", "y"), _palg, _pick_pair),
    Lemma("mpsam", "m.psa.m <= m", (), _mpsam, _pick_none),
    Lemma("pl", "pl = (pa)* + l.psa", (), _pl, _pick_none),
    Lemma("plm", "pl.m = m", (), _plm, _pick_none),
    Lemma("pmm", "pm.m = m and its mirror", (), _pmm, _pick_none),
    Lemma("mpsm", "m.psm.m <= m", (), _mpsm, _pick_none),
    Lemma("xmf", "x+m <= fx", ("x",), _xmf, _pick_x),
    Lemma("fact", "x <= psm and fx <= x+px.m.sx give pfx.m <= px.m", ("x",), _fact, _pick_below_psm),
    Lemma("main", "x <= psm gives fx <= x+px.m.sx", ("x",), _main, _pick_below_psm),
    Lemma("l0", "x <= m gives fx = m", ("x",), _l0, _pick_below_m),
    Lemma("pg", "pgx = pfx.(pm + (m.psfx)*)", ("x",), _pg, _pick_x),
    Lemma("pgxmsgx", "pgx.m.sgx <= gx", ("x",), _pgxmsgx, _pick_x),
    Lemma("pfxm", "pfx.m <= fx and its mirror", ("x",), _pfxm, _pick_x),
    Lemma("hg-axiom-cases", "f maps KS axiom instances to KS equalities", ("x", "y", "z"),
          _hg_axioms, _pick_xyz),
    Lemma("hg-star-induction-cases", "f preserves both star-induction rules", ("x", "y"),
          _hg_star, _pick_star_induction),
    Lemma("fxx", "fx = x follows from a = 0", ("x",), _fxx, _pick_x),
    Lemma("hg1", "fa = f0", (), _hg1, _pick_none),
    Lemma("mfproof-consequence", "f-equality is a congruence", ("u0", "v0", "u1", "v1"),
          _mfproof, _pick_congruence),
]

LEMMAS: dict[str, Lemma] = {lem.name: lem for lem in _REGISTRY}


def lemma_names() -> list[str]:
    return [lem.name for lem in _REGISTRY]


def lemma_statements(ctx: EliminationContext, x: Term) -> list[Obligation]:
    """Every lemma instantiated at ``x`` (with ``a`` and 0 filling the other
    variables) as obligations.  Hypothesis-extended statements are pushed
    through ``f`` once more, which is how they are decided."""
    binding = {"x": x, "y": ctx.a, "z": ZERO, "u0": ctx.a, "v0": ZERO, "u1": x, "v1": x}
    out = []
    for lem in _REGISTRY:
        for st in lem.statements(ctx, binding):
            conclusion = st.conclusion
            if st.under is not None:
                conclusion = conclusion.map(ctx.f)
            out.append(Obligation(f"lemma:{lem.name}:{st.label}", conclusion, st.premises))
    return out


# ---------------------------------------------------------------------------
# running the suite
# ---------------------------------------------------------------------------

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class LemmaResult:
    name: str
    sample: int
    binding: dict[str, str]
    status: str
    label: str = ""
    verdict: Verdict | None = None
    reason: str = ""

    @property
    def witness(self):
        return self.verdict.witness if self.verdict is not None else None

    @property
    def skipped(self) -> bool:
        return self.status == SKIP

    def to_record(self) -> dict:
        rec = {"lemma": self.name, "sample": self.sample, "status": self.status,
               "statement": self.label, "binding": self.binding}
        if self.witness is not None:
            rec["witness"] = render_word(self.witness)
        if self.reason:
            rec["reason"] = self.reason
        return rec


@dataclass
class LemmaSummary:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list[LemmaResult] = field(default_factory=list)


def _decide(eq: Equation, under: Term | None, alphabet) -> Verdict:
    from .decide import decide_ks, decide_under_hoare
    from .terms import Alphabet, HoareHypothesis, Problem

    if under is None:
        return decide_ks(eq.lhs, eq.rhs, alphabet)
    prob = Problem(Alphabet(tuple(alphabet)), (HoareHypothesis(under),), eq)
    return decide_under_hoare(prob).verdict


def _hypothesis_term(name: str, sample: int, seed: int, cfg: SampleConfig) -> Term:
    rng = derive_rng(seed, "hyp", name, sample)
    return random_term(rng, cfg.letters, cfg.hyp_size)


def run_sample(name: str, sample: int, seed: int, cfg: SampleConfig) -> LemmaResult:
    """One lemma on one sample; deterministic in (name, sample, seed, cfg)."""
    lem = LEMMAS[name]
    ctx = EliminationContext(_hypothesis_term(name, sample, seed, cfg))
    rng = derive_rng(seed, "bind", name, sample)
    tries = cfg.attempts if lem.conditional else 1
    last_binding: dict[str, Term] = {}
    for _ in range(tries):
        binding = lem.picker(rng, ctx, cfg)
        last_binding = binding
        # statements whose premises fail hold vacuously
        applicable = [st for st in lem.statements(ctx, binding)
                      if all(_decide(prem, None, cfg.letters).is_equal for prem in st.premises)]
        if applicable:
            return _conclude(lem, sample, ctx, binding, applicable, cfg)
    return LemmaResult(name, sample, _render_binding(ctx, last_binding), SKIP,
                       reason="hypothesis-not-sampled")


def _conclude(lem, sample, ctx, binding, statements, cfg) -> LemmaResult:
    rendered = _render_binding(ctx, binding)
    for st in statements:
        v = _decide(st.conclusion, st.under, cfg.letters)
        if not v.is_equal:
            return LemmaResult(lem.name, sample, rendered, FAIL, st.label, v)
    return LemmaResult(lem.name, sample, rendered, PASS, "; ".join(st.label for st in statements),
                       Verdict.equal())


def _render_binding(ctx, binding) -> dict[str, str]:
    out = {"a": render_term(ctx.a)}
    out.update((k, render_term(v)) for k, v in binding.items())
    return out


def _run_task(task):
    return run_sample(*task)


def check_lemmas(names: Iterable[str] | None = None, samples: int = 50, seed: int = 0, *,
                 size: int = 10, hyp_size: int = 8,
                 letters: Sequence[str] = DEFAULT_LETTERS, jobs: int = 1) -> list[LemmaResult]:
    """Run the named lemmas (all when ``names`` is None) on ``samples`` samples each.

    Results come back in registry order then sample order, whatever ``jobs``.
    """
    if names is None:
        chosen = lemma_names()
    else:
        wanted = set(names)
        unknown = sorted(wanted - set(LEMMAS))
        if unknown:
            raise ValueError(f"unknown lemma(s): {', '.join(unknown)}")
        chosen = [n for n in lemma_names() if n in wanted]
    cfg = SampleConfig(tuple(letters), hyp_size, size)
    tasks = [(n, i, seed, cfg) for n in chosen for i in range(samples)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks, chunksize=4))
    return [_run_task(t) for t in tasks]


def summarize(results: Iterable[LemmaResult]) -> dict[str, LemmaSummary]:
    out: dict[str, LemmaSummary] = {}
    for r in results:
        sm = out.setdefault(r.name, LemmaSummary(r.name))
        if r.status == PASS:
            sm.passed += 1
        elif r.status == FAIL:
            sm.failed += 1
            sm.failures.append(r)
        else:
            sm.skipped += 1
    return out
