"""Acceptance checks 1-10, shared by the test suite and ``oasp selftest``.

Each check returns a :class:`CheckResult`; none of them raise on a failed
comparison, so a run always reports every criterion.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import ctl, datalog, semantics
from .fpl import (
    build_comp,
    build_compg,
    build_gcomp,
    build_gcompg,
    completion_extension,
    enumerate_models,
    formula_class,
)
from .fpl.evaluate import CompiledFormula, _Context, all_structures
from .generators import (
    random_guarded_program,
    random_liter_program,
    random_loosely_guarded_program,
    random_program,
    random_stratified_program,
)
from .grounder import ground, herbrand_base
from .guardedness import analyze_program
from .model import Atom, OpenInterpretation, Program, Term, Universe, fresh_elements, program_signature
from .parser import parse_atoms, parse_program
from .solver import (
    SAT,
    UNSAT_UP_TO_BOUND,
    classical_answer_sets,
    enumerate_open_answer_sets,
    find_open_answer_set,
    satisfiable_up_to,
)
from .transforms import double_negation, free_choice, gua, hbg, to_p_program, GUA_PRED


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    cases: int
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    limit: float | None = None
    notes: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        extra = f"; {self.notes}" if self.notes else ""
        return (
            f"criterion {self.number:2d} {status}: {self.title}: {self.cases} cases, "
            f"{len(self.failures)} failures, {self.seconds:.1f}s{limit}{extra}"
        )

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "cases": self.cases,
            "failures": [str(f) for f in self.failures[:10]],
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "notes": self.notes,
        }


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def _finish(number, title, cases, failures, timer, limit=None, notes="") -> CheckResult:
    ok = not failures and (limit is None or timer.seconds <= limit)
    return CheckResult(number, title, ok, cases, failures, timer.seconds, limit, notes)


def _atoms(text: str) -> frozenset[Atom]:
    return parse_atoms(text)


# 1. worked examples

RESTORE = """
r1: restore(X) :- crash(X), y(X,Y), backSucc(Y).
r2: backSucc(X) :- neg_crash(X), y(X,Y), not backFail(Y).
r3: backFail(X) :- not backSucc(X).
r4: :- y(Y1,X), y(Y2,X), Y1 != Y2.
r5: y(X,Y) v not y(X,Y).
r6: crash(X) v not crash(X).
r7: neg_crash(X) v not neg_crash(X).
r8: :- crash(X), neg_crash(X).
"""

INFINITE = """
r1: q(X) :- f(X,Y).
r2: :- f(X,Y), not q(Y).
r3: :- f(X,Y), not well(Y).
r4: well(Y) :- q(Y), forall X (f(X,Y) => well(X)).
r5: f(X,Y) v not f(X,Y).
"""

FIXPOINT = "r: p(X) :- p(X)."

FIXPOINT2 = """
r1: p(X,a) :- not p(X,b), X != a, X != b.
r2: p(X,b) :- not p(X,a), X != a, X != b.
"""

GUA_EXAMPLE = """
q(X) :- f(X,Y).
f(a,Y) v not f(a,Y).
"""

GP_EXAMPLE = """
p(X) :- forall Y (q(Y) => r(Y)).
r(X) :- q(X).
q(X) v not q(X).
"""

PPROG_EXAMPLE = """
q(X) :- forall Y (r(Y) => s(X)).
r(a).
s(X) v not s(X).
"""


def _sets(program: Program, universe) -> set[frozenset[Atom]]:
    return {m.atoms for m in enumerate_open_answer_sets(program, universe)}


def worked_examples() -> list[tuple[str, bool, float]]:
    """(name, ok, seconds) for every worked example."""
    out = []

    def run(name: str, fn: Callable[[], bool]) -> None:
        start = time.perf_counter()
        try:
            ok = fn()
        except Exception as exc:  # reported, not raised
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        out.append((name, ok, time.perf_counter() - start))

    run(
        "two-choice p-program over {x,a,b}",
        lambda: _sets(parse_program(FIXPOINT2), ["x", "a", "b"]) == {_atoms("p(x,a)"), _atoms("p(x,b)")},
    )
    run("self-supporting rule over {x}", lambda: _sets(parse_program(FIXPOINT), ["x"]) == {frozenset()})

    def gua_case() -> bool:
        g = gua(parse_program(GUA_EXAMPLE))
        want = {_atoms("f(a,a), q(a), #g(a,a)"), _atoms("#g(a,a)")}
        return all(_sets(g, u) == want for u in (["a"], ["a", "x"]))

    run("binary guards over the constants", gua_case)

    def gp_case() -> bool:
        p = parse_program(GP_EXAMPLE)
        interp = OpenInterpretation(Universe(("x", "y")), _atoms("p(x), r(x), q(x), p(y)"))
        return semantics.is_open_answer_set(p, interp)

    run("generalized literal accepted interpretation", gp_case)

    def pprog_case() -> bool:
        p = parse_program(PPROG_EXAMPLE)
        res = satisfiable_up_to(p, "q", 1)
        want = OpenInterpretation(Universe(("a", "x")), _atoms("s(x), r(a), q(x)"))
        if res.status != SAT or not semantics.is_open_answer_set(p, want):
            return False
        pp, mapping = to_p_program(p)
        encoded = OpenInterpretation(
            Universe(("a", "x", *sorted(mapping.special_constants))),
            frozenset(mapping.encode(a) for a in want.atoms),
        )
        return semantics.is_open_answer_set(pp, encoded)

    run("p-program translation witness", pprog_case)
    return out


def check_worked_examples() -> CheckResult:
    with _Timer() as t:
        results = worked_examples()
    failures = [name for name, ok, secs in results if not ok or secs >= 1.0]
    return _finish(1, "worked examples", len(results), failures, t)


# 2. infinity at desk scale


def check_infinity(k_max: int = 3, limit: float = 30.0) -> CheckResult:
    failures = []
    cases = 0
    notes = []
    with _Timer() as t:
        for name, text, pred in (("restore", RESTORE, "restore"), ("infinity", INFINITE, "q")):
            start = time.perf_counter()
            res = satisfiable_up_to(parse_program(text), pred, k_max)
            secs = time.perf_counter() - start
            cases += 1
            notes.append(f"{name} {res.status} k<={res.bound_reached} in {secs:.1f}s")
            if res.status != UNSAT_UP_TO_BOUND or res.bound_reached != k_max or secs > limit:
                failures.append(f"{name}: {res.status} after {secs:.1f}s")
    return _finish(2, "infinity behaviour", cases, failures, t, notes="; ".join(notes))


# 3. completion bijection


def _universes(program: Program, max_fresh: int = 2) -> list[list[str]]:
    consts = sorted(t.name for t in program_signature(program).constants)
    out = []
    for k in range(max_fresh + 1):
        u = consts + fresh_elements(k, consts)
        if u:
            out.append(u)
    return out


def completion_mismatch(program: Program, universe, with_glits: bool) -> str | None:
    """None when open answer sets and completion models correspond exactly."""
    comp = build_compg(program) if with_glits else build_comp(program)
    asp = {
        frozenset(completion_extension(program, m, comp.pred, comp.arity).atoms())
        for m in enumerate_open_answer_sets(program, universe)
    }
    fol = {
        frozenset(s.atoms())
        for s in enumerate_models(comp.formulas, universe, {comp.pred: comp.arity})
    }
    if asp != fol:
        return f"{universe}: {len(asp)} answer sets vs {len(fol)} models for\n{program}"
    return None


def check_completion_bijection(programs: int = 200, seed: int = 3, limit: float = 300.0) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    cases = 0
    with _Timer() as t:
        for i in range(programs):
            with_glits = i % 2 == 1
            arity = rng.choice((1, 2))
            consts = ["a"] if rng.random() < 0.4 else []
            p = random_program(rng, {"p": arity}, consts, max_rules=3, glits=with_glits)
            for u in _universes(p):
                cases += 1
                bad = completion_mismatch(p, u, with_glits)
                if bad:
                    failures.append(bad)
    return _finish(3, "completion bijection", cases, failures, t, limit)


# 4. guardedness of the guarded completions


def _conjunction_equivalent(a: list, b: list, domain, vocab: dict[str, int], max_bits: int) -> bool:
    ca = [CompiledFormula(f) for f in a]
    cb = [CompiledFormula(f) for f in b]
    for s in all_structures(domain, vocab, 1 << max_bits):
        ctx_a, ctx_b = _Context(s), _Context(s)
        va = all(c.fn({}, {}, ctx_a) for c in ca)
        vb = all(c.fn({}, {}, ctx_b) for c in cb)
        if va != vb:
            return False
    return True


def _guarded_sample(rng: random.Random, i: int) -> tuple[Program, bool, str]:
    kind = i % 4
    if kind == 3:
        return hbg(random_loosely_guarded_program(rng)), False, "muLGF"
    glits = kind == 1 or kind == 2
    preds = {"p": rng.choice((1, 2))}
    consts = ["a"] if kind == 2 else []
    return hbg(random_guarded_program(rng, preds, consts, max_rules=2, glits=glits)), glits, "muGF"


def _vocabulary_bits(vocab: dict[str, int], size: int) -> int:
    return sum(size ** n for n in vocab.values())


def check_guarded_completions(programs: int = 100, seed: int = 4, max_bits: int = 16) -> CheckResult:
    """Programs are redrawn until every structure over a two-element domain fits in max_bits."""
    rng = random.Random(seed)
    failures = []
    cases = 0
    redrawn = 0
    with _Timer() as t:
        for i in range(programs):
            while True:
                p, with_glits, want = _guarded_sample(rng, i)
                plain = build_compg(p) if with_glits else build_comp(p)
                if _vocabulary_bits(plain.vocabulary(), 2) <= max_bits:
                    break
                redrawn += 1
            guarded = build_gcompg(p) if with_glits else build_gcomp(p)
            cls = formula_class(guarded.formulas)
            allowed = {"muGF", "GF"} if want == "muGF" else {"muGF", "GF", "muLGF", "LGF"}
            cases += 1
            if cls.fragment not in allowed or not cls.alternation_free:
                failures.append(f"class {cls} ({cls.reason}) for\n{p}")
            for u in _universes(p, 2):
                if len(u) > 2:
                    continue
                if not _conjunction_equivalent(guarded.formulas, plain.formulas, u, plain.vocabulary(), max_bits):
                    failures.append(f"guarded and plain completion differ over {u} for\n{p}")
    return _finish(4, "guarded completions", cases, failures, t, notes=f"{redrawn} oversized programs redrawn")


# 5. transformations


def _sat_at(program: Program, goals_for: Callable[[list[str]], list[Atom]], k: int, extra: list[str] = ()) -> bool | None:
    consts = sorted(t.name for t in program_signature(program).constants if t.name not in extra)
    fresh = fresh_elements(k, set(consts) | set(extra))
    elements = consts + fresh
    if not elements:
        return None
    universe = Universe(tuple(elements + sorted(extra)))
    return find_open_answer_set(program, universe, goals_for(elements)) is not None


def _goal_atoms(pred: str, arity: int):
    def goals(elements: list[str]) -> list[Atom]:
        return [Atom(pred, tuple(Term(e) for e in c)) for c in itertools.product(elements, repeat=arity)]

    return goals


def check_transformations(instances: int = 200, seed: int = 5) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    cases = 0
    with _Timer() as t:
        for _ in range(instances):
            p = random_program(rng, {"p": 1, "q": 2}, ["a"] if rng.random() < 0.5 else [], max_rules=3, glits=rng.random() < 0.5)
            h = hbg(p)
            for u in _universes(p, 3):
                if len(u) > 3:
                    continue
                cases += 1
                if _sets(p, u) != _sets(h, u):
                    failures.append(f"hbg changes answer sets over {u} for\n{p}")

        for _ in range(instances):
            p = random_program(rng, {"p": 1, "q": 2}, ["a"] if rng.random() < 0.5 else [], max_rules=3, glits=rng.random() < 0.5)
            pp, mapping = to_p_program(p)
            specials = sorted(mapping.special_constants)
            for pred, arity in sorted(program_signature(p).predicates.items()):
                for k in (0, 1, 2):
                    direct = _sat_at(p, _goal_atoms(pred, arity), k)
                    if direct is None:
                        continue
                    packed = _sat_at(pp, lambda els, pred=pred: mapping.query_atoms(pred, els), k, specials)
                    cases += 1
                    if direct != packed:
                        failures.append(f"p-program verdict for {pred} at k={k} differs for\n{p}")

        for _ in range(instances):
            p = Program(())
            while not program_signature(p).constants:
                p = random_program(rng, {"p": 1, "q": 2}, ["a", "b"] if rng.random() < 0.5 else ["a"], max_rules=3, glits=rng.random() < 0.5)
            classic = {m.atoms for m in classical_answer_sets(p)}
            guarded = {
                frozenset(a for a in m.atoms if a.pred != GUA_PRED)
                for m in enumerate_open_answer_sets(gua(p), sorted(t.name for t in program_signature(p).constants))
            }
            cases += 1
            if classic != guarded:
                failures.append(f"gua differs from classical answer sets for\n{p}")

        for _ in range(instances):
            p = random_liter_program(rng)
            d = double_negation(p)
            fp = free_choice(p)
            fd = _free_choice_like(d, fp)
            for pred in sorted({r.head_pos.pred for r in p.rules}):
                for k in (1, 2):
                    cases += 1
                    a = _sat_at(fp, _goal_atoms(pred, 1), k)
                    b = _sat_at(fd, _goal_atoms(pred, 1), k)
                    if a != b:
                        failures.append(f"double negation changes {pred} at k={k} for\n{p}")
    return _finish(5, "transformation equivalences", cases, failures, t)


def _free_choice_like(program: Program, reference: Program) -> Program:
    """``program`` plus the free rules that ``reference`` added for its inputs."""
    extra = tuple(r for r in reference.rules if r.name and r.name.startswith("#free_"))
    return Program(program.rules + extra)


# 6. reduct commutation


def check_reduct_commutation(pairs: int = 500, seed: int = 6) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    with _Timer() as t:
        for _ in range(pairs):
            p = random_program(rng, {"p": 1, "q": 2}, ["a"], max_rules=3, glits=True)
            u = ["a"] + fresh_elements(rng.randint(0, 1), ["a"])
            g = ground(p, u)
            base = sorted(herbrand_base(p, u))
            interp = OpenInterpretation(Universe(tuple(u)), frozenset(a for a in base if rng.random() < 0.5))
            if not semantics.reduct_commute_check(g, interp):
                failures.append(f"{interp} for\n{p}")
    return _finish(6, "reduct commutation", pairs, failures, t)


# 7. Datalog correspondence


def check_datalog(programs: int = 100, seed: int = 7) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    cases = 0
    with _Timer() as t:
        for _ in range(programs):
            p = random_stratified_program(rng, {"e": 2, "f": 1}, {"a": 1, "b": 2}, ["c"] if rng.random() < 0.3 else [])
            consts = sorted(t.name for t in program_signature(p).constants)
            for k in (1, 2, 3):
                u = consts + fresh_elements(k - len(consts), consts) if k > len(consts) else consts
                cases += 1
                sets = enumerate_open_answer_sets(p, u)
                lfp = datalog.lfp_model(p, datalog.identity_input(u)).facts
                if len(sets) != 1 or sets[0].atoms != lfp:
                    failures.append(f"{len(sets)} answer sets vs least model over {u} for\n{p}")
            fp = free_choice(p)
            for pred, arity in (("a", 1), ("b", 2)):
                if not any(r.head_pos.pred == pred for r in p.rules):
                    continue
                for k in (1, 2):
                    dom = consts + fresh_elements(k, consts)
                    if len(dom) > 3:
                        continue
                    cases += 1
                    answer = find_open_answer_set(fp, dom, _goal_atoms(pred, arity)(dom)) is not None
                    query = datalog.query_satisfiable(p, pred, dom) is not None
                    if answer != query:
                        failures.append(f"query {pred} over {dom}: answer sets {answer}, inputs {query} for\n{p}")
    return _finish(7, "Datalog correspondence", cases, failures, t)


# 8. CTL dual verdicts


def check_ctl(max_size: int = 5, max_temporal: int = 3, states=(1, 2, 3), limit: float = 600.0) -> CheckResult:
    failures = []
    cases = 0
    with _Timer() as t:
        formulas = ctl.distinct_normalized(("p", "q"), max_temporal, max_size)
        for f in formulas:
            enc = ctl.encode(f)
            report = analyze_program(enc.program, max_width=2, max_arity=2)
            if "GgP" not in report.classes or not report.bound:
                failures.append(f"encoding of {ctl.render_ctl(f)} is {report.program_class}, width {report.width}")
            for n in states:
                cases += 1
                verdict = ctl.dual_check(f, n)
                if not verdict.agree:
                    failures.append(verdict.to_json())
    return _finish(
        8, "CTL dual verdicts", cases, failures, t, limit,
        notes=f"{len(formulas)} formulas of at most {max_size} nodes",
    )


# 9. finite support


def check_finite_support(programs: int = 200, seed: int = 9) -> CheckResult:
    rng = random.Random(seed)
    failures = []
    cases = 0
    samples = [(parse_program(t), u) for t, u in ((FIXPOINT2, ["x", "a", "b"]), (GP_EXAMPLE, ["x", "y"]))]
    for _ in range(programs):
        p = random_program(rng, {"p": 1, "q": 2}, ["a"], max_rules=3, glits=rng.random() < 0.5)
        samples.append((p, ["a"] + fresh_elements(rng.randint(0, 2), ["a"])))
    with _Timer() as t:
        for p, u in samples:
            for m in enumerate_open_answer_sets(p, u):
                cases += 1
                depths = semantics.support_depths(p, m)
                if set(depths) != set(m.atoms) or any(d > len(m.atoms) for d in depths.values()):
                    failures.append(f"{m} for\n{p}")
    return _finish(9, "finite support", cases, failures, t)


# 10. size bounds


def program_size(program: Program) -> int:
    """Symbol occurrences: one per atom plus one per argument."""
    return sum(1 + len(a.args) for r in program.rules for a in r.atoms())


def _fit_constant(pairs: list[tuple[int, int]], degree: int) -> float:
    return max(out / max(inp, 1) ** degree for inp, out in pairs)


def check_size_bounds(programs: int = 200, seed: int = 10) -> CheckResult:
    """Constants fitted on small programs must bound the sizes of larger ones."""
    rng = random.Random(seed)
    failures = []
    shapes = {"p-program": (2, lambda p: to_p_program(p)[0]), "hbg": (1, hbg), "gua": (2, gua)}
    small = {k: [] for k in shapes}
    large = {k: [] for k in shapes}
    with _Timer() as t:
        for i in range(programs):
            big = i >= programs // 2
            preds = {f"p{j}": rng.randint(1, 3) for j in range(1, (5 if big else 3))}
            p = random_program(rng, preds, ["a", "b"] if big else ["a"], max_rules=8 if big else 3, n_vars=3, glits=True)
            for name, (_, fn) in shapes.items():
                (large if big else small)[name].append((program_size(p), program_size(fn(p))))
        notes = []
        for name, (degree, _) in shapes.items():
            c = _fit_constant(small[name], degree)
            worst = max(out / (c * inp ** degree) for inp, out in large[name])
            notes.append(f"{name} c={c:.2f} worst={worst:.2f}")
            if worst > 1.0:
                failures.append(f"{name} exceeds the degree-{degree} fit by {worst:.2f}x")
    return _finish(10, "size bounds", programs * len(shapes), failures, t, notes="; ".join(notes))


CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_worked_examples,
    2: check_infinity,
    3: check_completion_bijection,
    4: check_guarded_completions,
    5: check_transformations,
    6: check_reduct_commutation,
    7: check_datalog,
    8: check_ctl,
    9: check_finite_support,
    10: check_size_bounds,
}


def run_all(only: list[int] | None = None, report: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for number, fn in CHECKS.items():
        if only and number not in only:
            continue
        res = fn()
        results.append(res)
        if report is not None:
            report(res.line())
    return results
