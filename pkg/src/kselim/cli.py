"""Command-line front end.

Problem files are line oriented, UTF-8, with ``#`` comments::

    alphabet b c
    hyp b = 0
    goal b;c = 0;c

Exit codes: 0 equal / all pass, 1 unequal / some failure, 2 error.  In
printed witness words the character ``0`` is the semantic zero symbol, not
the constant.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence, TextIO

from .decide import (
    EliminationReport, crosscheck, decide_problem, decide_staged, witness_sides,
)
from .elimination import EliminationContext, KaHoare, combine_hypotheses, eliminate
from .semantics.automata import Outcome, parse_word, render_word
from .semantics.bounded import DEFAULT_BUDGET, OracleBudgetExceeded
from .semantics.construct import KA, glushkov, semantic_symbols
from .terms import (
    ZERO, Alphabet, Equation, HoareHypothesis, ParseError, Problem, dag_size, letters, normalize,
    parse_equation, render_term, size,
)

EXIT_EQUAL, EXIT_UNEQUAL, EXIT_ERROR = 0, 1, 2
PROBLEM_SUFFIX = ".ks"


class ProblemFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def parse_problem(text: str, source: str = "<input>") -> Problem:
    """Parse the problem-file format into a :class:`Problem`."""
    alphabet: list[str] | None = None
    hyps: list[tuple[int, str]] = []
    goal: tuple[int, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "alphabet":
            if alphabet is not None:
                raise ProblemFileError("alphabet declared twice", lineno, source)
            alphabet = rest.split()
        elif keyword == "hyp":
            hyps.append((lineno, rest))
        elif keyword == "goal":
            if goal is not None:
                raise ProblemFileError("more than one goal line", lineno, source)
            goal = (lineno, rest)
        else:
            raise ProblemFileError(f"unknown directive {keyword!r}", lineno, source)
    if goal is None:
        raise ProblemFileError("missing goal line", None, source)
    try:
        alpha = Alphabet(tuple(alphabet or ()))
    except ValueError as exc:
        raise ProblemFileError(str(exc), None, source) from None
    check = alpha if alphabet is not None else None

    def equation(lineno, body):
        try:
            return parse_equation(body, check)
        except ParseError as exc:
            raise ProblemFileError(str(exc), lineno, source) from None

    hypotheses = []
    for lineno, body in hyps:
        eq = equation(lineno, body)
        if eq.rhs is not ZERO:
            raise ProblemFileError("hypotheses must have the form <term> = 0", lineno, source)
        hypotheses.append(HoareHypothesis(eq.lhs))
    goal_eq = equation(*goal)
    if alphabet is None:
        alpha = Alphabet.covering(Alphabet(()), goal_eq.lhs, goal_eq.rhs,
                                  *(h.a for h in hypotheses))
    return Problem(alpha, tuple(hypotheses), goal_eq)


def format_problem(problem: Problem) -> str:
    lines = ["alphabet " + " ".join(problem.alphabet.letters)]
    lines += [f"hyp {render_term(h.a)} = 0" for h in problem.hypotheses]
    lines.append(f"goal {problem.goal}")
    return "\n".join(lines) + "\n"


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(exc.strerror or str(exc), None, str(path)) from None
    return parse_problem(text, str(path))


def corpus_files(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise ProblemFileError("not a directory", None, str(directory))
    return sorted(directory.glob(f"*{PROBLEM_SUFFIX}"))


def default_corpus() -> Path:
    return Path(str(resources.files("kselim") / "data" / "corpus"))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit_json(record: dict, out: TextIO) -> None:
    out.write(json.dumps(record, sort_keys=True) + "\n")


def _emit_fields(pairs: Sequence[tuple[str, object]], out: TextIO) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        out.write(f"{key.ljust(width)}  {value}\n")


def _exit_for(outcome: Outcome) -> int:
    return EXIT_EQUAL if outcome is Outcome.EQUAL else EXIT_UNEQUAL


def _shown(term, limit: int) -> str:
    n = size(term)
    if limit and n > limit:
        return f"<term of size {n}, dag {dag_size(term)}; raise --max-render to print>"
    return render_term(term)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_decide(args, out: TextIO) -> int:
    problem = load_problem(args.problem)
    if args.staged:
        if args.theory != "ks" or len(problem.hypotheses) < 2:
            raise ProblemFileError("--staged needs --theory ks and at least two hypotheses",
                                   None, args.problem)
        report = decide_staged(problem)
    else:
        report = decide_problem(problem, args.theory)
    record = report.to_record()

    if args.selfcheck and report.verdict.witness is not None:
        word = parse_word(render_word(report.verdict.witness))
        names = problem.alphabet.letters
        lhs, rhs = report.transformed.lhs, report.transformed.rhs
        if args.theory == "ks":
            sides = witness_sides(lhs, rhs, word, names)
        else:
            symbols = semantic_symbols(set(names) | letters(lhs) | letters(rhs), KA)
            sides = tuple(glushkov(t, False, symbols).accepts(word) for t in (lhs, rhs))
        if sides[0] == sides[1]:
            raise RuntimeError(f"selfcheck failed: witness {render_word(word)!r} "
                               f"is accepted by {'both' if sides[0] else 'neither'} side(s)")
        record["selfcheck"] = "ok"

    if args.crosscheck is not None:
        if args.theory != "ks":
            raise ProblemFileError("--crosscheck applies to --theory ks only", None, args.problem)
        cc = crosscheck(problem.goal.lhs, problem.goal.rhs, problem.hypotheses, args.crosscheck,
                        seed=args.seed, budget=args.budget, alphabet=problem.alphabet.letters)
        if cc.partial:
            raise OracleBudgetExceeded(f"oracle budget of {args.budget} words exceeded")
        if not cc.consistent:
            raise RuntimeError("crosscheck disagreement: " + "; ".join(cc.disagreements))
        record["crosscheck"] = {"oracle": cc.oracle.outcome.value,
                                "relational": ("refuted" if cc.relational.outcome is Outcome.UNEQUAL
                                               else "not-refuted"),
                                "models_applicable": cc.models_applicable,
                                "maxlen": args.crosscheck}

    if args.json:
        _emit_json(record, out)
    else:
        witness = record.get("witness")
        pairs = [("verdict", record["verdict"]), ("theory", record["theory"]),
                 ("goal", record["goal"])]
        if record.get("hypothesis") is not None:
            pairs.append(("hypothesis", record["hypothesis"]))
        pairs.append(("witness", "-" if witness is None else (witness or "(empty word)")))
        for key in sorted(k for k in record if k not in {"verdict", "theory", "goal",
                                                         "hypothesis", "witness", "crosscheck"}):
            value = record[key]
            pairs.append((key, f"{value:.6f}" if isinstance(value, float) else value))
        if "crosscheck" in record:
            cc = record["crosscheck"]
            pairs.append(("crosscheck", f"oracle={cc['oracle']} relational={cc['relational']} "
                                        f"models={cc['models_applicable']} maxlen={cc['maxlen']}"))
        _emit_fields(pairs, out)
    return _exit_for(report.verdict.outcome)


def cmd_eliminate(args, out: TextIO) -> int:
    problem = load_problem(args.problem)
    if not problem.hypotheses:
        raise ProblemFileError("eliminate needs at least one hypothesis", None, args.problem)
    a = combine_hypotheses(problem.hypotheses)
    goal = problem.goal
    limit = args.max_render
    if args.baseline == "ka":
        alphabet = problem.alphabet.covering(a, goal.lhs, goal.rhs)
        t = eliminate(KaHoare(a, alphabet), goal)
        rows = [("a", render_term(a)), ("f(lhs)", _shown(t.lhs, limit)),
                ("f(rhs)", _shown(t.rhs, limit)),
                ("f(lhs)_size", size(t.lhs)), ("f(rhs)_size", size(t.rhs))]
    else:
        ctx = EliminationContext(a)
        t = Equation(ctx.f(normalize(goal.lhs)), ctx.f(normalize(goal.rhs)))
        rows = [("a", render_term(ctx.a)), ("l", _shown(ctx.l, limit)), ("m", _shown(ctx.m, limit)),
                ("f(lhs)", _shown(t.lhs, limit)), ("f(rhs)", _shown(t.rhs, limit)),
                ("a_size", size(ctx.a)), ("m_size", size(ctx.m)),
                ("f(lhs)_size", size(t.lhs)), ("f(rhs)_size", size(t.rhs)),
                ("f(lhs)_dag", dag_size(t.lhs)), ("f(rhs)_dag", dag_size(t.rhs))]
    if args.json:
        _emit_json({k: v for k, v in rows}, out)
    else:
        _emit_fields(rows, out)
    return EXIT_EQUAL


def cmd_lemmas(args, out: TextIO) -> int:
    from .lemmas import check_lemmas, lemma_names, summarize

    names = args.names or None
    results = check_lemmas(names, args.samples, args.seed, size=args.size,
                           hyp_size=args.hyp_size, jobs=args.jobs)
    summary = summarize(results)
    order = names and [n for n in lemma_names() if n in set(names)] or lemma_names()
    failed = False
    if args.json:
        for r in results:
            _emit_json(r.to_record(), out)
    else:
        width = max(len(n) for n in order)
        out.write(f"{'lemma'.ljust(width)}  {'pass':>5} {'fail':>5} {'skip':>5}\n")
        for name in order:
            sm = summary[name]
            out.write(f"{name.ljust(width)}  {sm.passed:>5} {sm.failed:>5} {sm.skipped:>5}\n")
    for name in order:
        for r in summary[name].failures:
            failed = True
            if not args.json:
                binding = ", ".join(f"{k}={v}" for k, v in r.binding.items())
                out.write(f"FAIL {name} [{r.label}] sample {r.sample}: {binding}; "
                          f"witness {render_word(r.witness)!r}\n")
    return EXIT_UNEQUAL if failed else EXIT_EQUAL


BENCH_COLUMNS = ("problem", "hyps", "goal_size", "a_size", "m_size", "f_lhs_size", "f_rhs_size",
                 "f_lhs_dag", "f_rhs_dag", "m_states", "lhs_states", "rhs_states", "verdict",
                 "seconds")


@dataclass(frozen=True)
class _BenchTask:
    path: str
    theory: str


def _bench_one(task: _BenchTask) -> dict:
    problem = load_problem(task.path)
    report: EliminationReport = decide_problem(problem, task.theory)
    rec = {key: None for key in BENCH_COLUMNS}
    rec.update({k: v for k, v in report.to_record().items() if k in rec})
    rec["problem"] = Path(task.path).stem
    rec["hyps"] = len(problem.hypotheses)
    rec["goal_size"] = size(problem.goal.lhs) + size(problem.goal.rhs)
    rec["verdict"] = report.verdict.outcome.value
    rec["seconds"] = round(report.seconds, 4)
    return rec


def bench_records(paths: Sequence[Path], theory: str = "ks", jobs: int = 1) -> list[dict]:
    tasks = [_BenchTask(str(p), theory) for p in paths]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_bench_one, tasks))
    return [_bench_one(t) for t in tasks]


def format_bench_table(records: Sequence[dict], timing: bool = True) -> str:
    columns = [c for c in BENCH_COLUMNS if timing or c != "seconds"]
    cells = [[("-" if r[c] is None else (f"{r[c]:.4f}" if c == "seconds" else str(r[c])))
              for c in columns] for r in records]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                       for i, (c, w) in enumerate(zip(columns, widths))).rstrip()]
    for row in cells:
        lines.append("  ".join(v.ljust(w) if i == 0 else v.rjust(w)
                               for i, (v, w) in enumerate(zip(row, widths))).rstrip())
    return "\n".join(lines) + "\n"


def cmd_bench(args, out: TextIO) -> int:
    directory = Path(args.corpus) if args.corpus else default_corpus()
    records = bench_records(corpus_files(directory), args.theory, args.jobs)
    if args.json:
        for rec in records:
            if not args.timing:
                rec = {k: v for k, v in rec.items() if k != "seconds"}
            _emit_json(rec, out)
    else:
        out.write(format_bench_table(records, args.timing))
    return EXIT_EQUAL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kselim",
        description="Decide Kleene-semiring equalities under Hoare hypotheses a = 0.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide the goal of a problem file")
    d.add_argument("problem")
    d.add_argument("--theory", choices=("ks", "ka"), default="ks")
    d.add_argument("--staged", action="store_true",
                   help="eliminate hypotheses one at a time instead of summing them")
    d.add_argument("--crosscheck", type=int, metavar="MAXLEN",
                   help="compare against the bounded oracle and relational models")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="word cap for the bounded oracle")
    d.add_argument("--selfcheck", action="store_true",
                   help="reparse the witness and check it separates the two sides")
    d.add_argument("--json", action="store_true")
    d.set_defaults(run=cmd_decide)

    e = sub.add_parser("eliminate", help="print the transformed goal without deciding")
    e.add_argument("problem")
    e.add_argument("--baseline", choices=("ka",), help="use the Kleene-algebra transform")
    e.add_argument("--max-render", type=int, default=4000,
                   help="largest term size printed in full (0 prints everything)")
    e.add_argument("--json", action="store_true")
    e.set_defaults(run=cmd_eliminate)

    lm = sub.add_parser("lemmas", help="run the lemma suite on random samples")
    lm.add_argument("names", nargs="*", help="lemma names (default: all)")
    lm.add_argument("--samples", type=_positive, default=50)
    lm.add_argument("--seed", type=int, default=0)
    lm.add_argument("--size", type=_positive, default=10, help="sample term size bound")
    lm.add_argument("--hyp-size", type=_positive, default=8, help="hypothesis term size bound")
    lm.add_argument("--jobs", type=_positive, default=1)
    lm.add_argument("--json", action="store_true")
    lm.set_defaults(run=cmd_lemmas)

    b = sub.add_parser("bench", help="decide every problem of a corpus and tabulate metrics")
    b.add_argument("corpus", nargs="?", help="directory of *.ks files (default: shipped corpus)")
    b.add_argument("--theory", choices=("ks", "ka"), default="ks")
    b.add_argument("--jobs", type=_positive, default=1)
    b.add_argument("--no-timing", dest="timing", action="store_false",
                   help="omit wall times so the output is byte-stable")
    b.add_argument("--json", action="store_true")
    b.set_defaults(run=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_EQUAL
    try:
        return args.run(args, out)
    except (ValueError, OSError, RuntimeError) as exc:
        err.write(f"kselim: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
