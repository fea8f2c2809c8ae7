import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from oasp import ctl
from oasp.generators import random_guarded_program, random_loosely_guarded_program, random_program
from oasp.guardedness import analyze_glit, analyze_program, analyze_rule
from oasp.parser import parse_ctl, parse_program, parse_rule

INFINITE = """
r1: q(X) :- f(X,Y).
r2: :- f(X,Y), not q(Y).
r3: :- f(X,Y), not well(Y).
r4: well(Y) :- q(Y), forall X (f(X,Y) => well(X)).
r5: f(X,Y) v not f(X,Y).
"""


def texts(guard):
    return None if guard is None else sorted(str(a) for a in guard)


def test_loosely_guarded_rule_with_head_guard():
    r = analyze_rule(parse_rule("a(X) v not g(X,Y,Z) :- not b(X,Y), f(X,Y), f(X,Z), h(Y,Z), not c(Y)."))
    assert r.loosely_guarded and r.fully_loosely_guarded
    assert not r.guarded
    assert texts(r.loose_body_guard) == ["f(X,Y)", "f(X,Z)", "h(Y,Z)"]
    assert texts(r.loose_head_guard) == ["g(X,Y,Z)"]


def test_self_support_is_guarded_but_head_guard_is_implicit():
    r = analyze_rule(parse_rule("p(X) :- p(X)."))
    assert r.guarded
    assert not r.strictly_fully_guarded
    assert texts(r.head_guard) == ["X = X"] and r.implicit


def test_ground_rule_is_vacuously_guarded():
    r = analyze_rule(parse_rule("a :- not b."))
    assert r.guarded and r.fully_guarded and r.body_guard == ()


def test_glit_guards():
    (g,) = parse_rule("well(Y) :- q(Y), forall X (f(X,Y) & X != z => well(X)).").glits
    assert str(analyze_glit(g).guard) == "f(X,Y)"
    (g,) = parse_rule("q(X) :- forall Y (r(Y) => s(X)).").glits
    assert analyze_glit(g) is None
    (g,) = parse_rule("p(X) :- forall Y (q(Y) => r(Y)).").glits
    assert str(analyze_glit(g).guard) == "q(Y)"


def test_vacuous_quantified_variables_are_dropped():
    (g,) = parse_rule("p(X) :- forall X1, Y (q(X) => r(X)).").glits
    guard = analyze_glit(g)
    assert guard is not None and guard.bound == ()


def test_infinity_program_is_ggp():
    report = analyze_program(parse_program(INFINITE))
    assert report.program_class == "GgP"
    assert texts(report.rules[0].body_guard) == ["f(X,Y)"]


def test_ctl_encoding_is_bound_ggp():
    for text in ("AF c", "~(t & ~AF c)", "E(p U q) & EX ~p"):
        report = analyze_program(ctl.encode(parse_ctl(text)).program)
        assert "GgP" in report.classes
        assert report.bound and report.width <= 2 and report.max_arity <= 2


def test_unguarded_program_has_no_class():
    report = analyze_program(parse_program("p(X) :- q(Y), r(Z)."))
    assert report.program_class is None and report.classes == []


def covers_pairs(guard, variables):
    pairs = itertools.combinations_with_replacement(sorted(variables), 2)
    return all(any({x, y} <= {t.name for t in a.variables()} for a in guard) for x, y in pairs)


def check_report(rule):
    r = analyze_rule(rule)
    vs = set(r.variables)
    if r.guarded and vs:
        assert len(r.body_guard) == 1 and vs <= {t.name for t in r.body_guard[0].variables()}
    if r.loosely_guarded and vs:
        assert covers_pairs(r.loose_body_guard, vs)
    if r.fully_loosely_guarded and vs:
        assert covers_pairs(r.loose_head_guard, vs)
    assert not r.fully_guarded or r.guarded
    assert not r.fully_loosely_guarded or r.loosely_guarded
    assert not r.guarded or r.loosely_guarded
    assert not r.fully_guarded or r.fully_loosely_guarded


@given(st.integers(0, 10**9))
def test_reports_are_sound_and_monotone(seed):
    rng = random.Random(seed)
    programs = [
        random_program(rng, {"p": 1, "q": 2, "g": 3}, ("a",), n_vars=3, glits=True),
        random_guarded_program(rng, {"p": 2, "s": 1}, ("a",), glits=True),
        random_loosely_guarded_program(rng),
    ]
    for p in programs:
        for rule in p.rules:
            check_report(rule)
