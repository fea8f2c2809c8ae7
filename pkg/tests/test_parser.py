import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oasp import ctl_syntax as C
from oasp.errors import ArityError, OaspError, ParseError
from oasp.generators import random_program
from oasp.model import Program
from oasp.parser import parse_atoms, parse_ctl, parse_program, parse_rule, render_ctl, render_program

RESTORE = """
r1: restore(X) :- crash(X), y(X,Y), backSucc(Y).
r2: backSucc(X) :- -crash(X), y(X,Y), not backFail(Y).
r3: backFail(X) :- not backSucc(X).
r4: :- y(Y1,X), y(Y2,X), Y1 != Y2.
r5: y(X,Y) v not y(X,Y).
r6: crash(X) v not crash(X).
r7: -crash(X) v not -crash(X).
"""


def test_restore_rule_shape():
    (rule,) = parse_program("r1: restore(X) :- crash(X), y(X,Y), backSucc(Y).").rules
    assert rule.name == "r1"
    assert len(rule.variables()) == 2
    assert rule.head_pos.pred == "restore"


def test_free_rule_and_generalized_literal():
    assert parse_rule("p(X) v not p(X).").is_free()
    rule = parse_rule("ok :- forall X (critical(X) => work(X)).")
    assert len(rule.glits) == 1
    assert str(rule.glits[0]) == "forall X (critical(X) => work(X))"


def test_default_rule_names_follow_position():
    p = parse_program("a. b :- a. c :- b.")
    assert [r.name for r in p.rules] == ["r1", "r2", "r3"]


def test_classical_negation_compiles_to_fresh_predicate():
    p = parse_program(RESTORE)
    preds = {a.pred for r in p.rules for a in r.atoms()}
    assert "neg_crash" in preds
    consistency = [r for r in p.rules if r.name == "consistent_crash"]
    assert len(consistency) == 1
    assert render_program(Program(tuple(consistency))) == "consistent_crash: :- crash(X1), neg_crash(X1).\n"


def test_restore_round_trip():
    p = parse_program(RESTORE)
    assert parse_program(render_program(p)) == p


def test_empty_program_renders_empty():
    assert render_program(Program(())) == ""
    assert parse_program("% only a comment\n") == Program(())


def test_generalized_literal_surface_form_survives():
    text = "q(X) :- f(X), forall Y (r(X,Y) & ~s(Y) => t(Y)).\n"
    again = render_program(parse_program(text))
    assert "forall Y (" in again
    assert parse_program(again) == parse_program(text)


@settings(max_examples=1000)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_on_random_programs(seed):
    rng = random.Random(seed)
    p = random_program(rng, {"p": 1, "q": 2, "r": 1}, ("a", "b"), max_rules=4, n_vars=2, glits=True)
    assert parse_program(render_program(p)) == p


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("p(X) :- q(X)", 1, 13),
        ("p(a).\nq(a,b) :- p(a), p(a,b).", 2, 1),
        ("X = Y :- p(X).", 1, 1),
        ("p(X) :- forall Y (q(Y) => not r(Y)).", 1, 27),
        ("p(a) :- q(b) $", 1, 14),
    ],
)
def test_errors_carry_spans(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert info.value.span is not None
    assert (info.value.span.line, info.value.span.column) == (line, column)


def test_arity_conflict_is_reported_by_the_parser():
    with pytest.raises((ParseError, ArityError)):
        parse_program("p(a,b). p(c).")


def test_generalized_literal_rejected_in_head():
    with pytest.raises(ParseError):
        parse_program("forall X (p(X) => q(X)) :- r.")


def test_parse_atoms_accepts_braces():
    assert parse_atoms("{p(a), q(a,b)}") == parse_atoms("p(a), q(a,b)")
    with pytest.raises(OaspError):
        parse_atoms("p(X)")


def test_ctl_parse_examples():
    f = parse_ctl("t -> AF c")
    assert f == C.Implies(C.Prop("t"), C.Unary("AF", C.Prop("c")))
    assert parse_ctl("p") == C.Prop("p")
    assert parse_ctl("E (p U q)") == C.Until("E", C.Prop("p"), C.Prop("q"))
    assert parse_ctl("A[p U q]") == C.Until("A", C.Prop("p"), C.Prop("q"))


@pytest.mark.parametrize("text", ["AG (p -> EX q)", "~(t & ~AF c)", "E(true U p) <-> EF p", "A(p U q) | EG ~q"])
def test_ctl_round_trip(text):
    f = parse_ctl(text)
    assert parse_ctl(render_ctl(f)) == f


def test_ctl_rejects_dangling_quantifier():
    with pytest.raises(ParseError):
        parse_ctl("E p")
