import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oasp.datalog import check_lite_class, eval_query, identity_input, query_satisfiable
from oasp.errors import UnsupportedError
from oasp.generators import random_guarded_program, random_liter_program, random_loosely_guarded_program, random_program
from oasp.guardedness import analyze_program
from oasp.model import program_signature, program_universe
from oasp.parser import parse_program, render_program
from oasp.solver import SAT, classical_answer_sets, enumerate_open_answer_sets, find_open_answer_set, satisfiable_up_to
from oasp.transforms import GUA_PRED, double_negation, free_choice, gua, guard_facts, hbg, to_p_program

from conftest import atoms

SMALL = {"p": 1, "q": 2}


def render(p):
    return render_program(p)


def test_p_program_of_the_four_rule_example():
    p = parse_program("h(a,b) :- q(X).\nq(X) v not q(X).\n:- q(a).\n:- q(b).")
    pp, mapping = to_p_program(p)
    assert render(pp) == (
        "r1: #p(a,b,h) :- #p(X,#0,q), X != #0, X != h, X != q.\n"
        "r2: #p(X,#0,q) v not #p(X,#0,q).\n"
        "r3: :- #p(a,#0,q).\n"
        "r4: :- #p(b,#0,q).\n"
    )
    assert mapping.arity == 3 and mapping.special_constants == {"#0", "h", "q"}
    models = {frozenset(filter(None, map(mapping.decode, m.atoms))) for m in
              enumerate_open_answer_sets(pp, ["x", "a", "b", *sorted(mapping.special_constants)])}
    assert {frozenset(), atoms("q(x), h(a,b)")} <= models


def test_p_program_antecedent_gets_in_literals():
    pp, _ = to_p_program(parse_program("q(X) :- forall Y (r(Y) => s(X)).\nr(a).\ns(X) v not s(X)."))
    assert "forall Y (#p(Y,r) & Y != #0 & Y != q & Y != r & Y != s => #p(X,s))" in render(pp)


def test_unary_program_without_constants_has_binary_p():
    pp, mapping = to_p_program(parse_program("q(X) :- r(X)."))
    assert mapping.arity == 2
    assert render(pp) == "r1: #p(X,q) :- #p(X,r), X != #0, X != q, X != r.\n"


def test_mapping_round_trip():
    _, mapping = to_p_program(parse_program("h(a,b) :- q(X)."))
    for text in ("h(a,b)", "q(x)"):
        (a,) = atoms(text)
        assert mapping.decode(mapping.encode(a)) == a
    (junk,) = atoms("#p(q,#0,q)")
    assert mapping.decode(junk) is None


def test_hbg_examples():
    out = hbg(parse_program("p(X) :- p(X).\n:- q(a).\nf(X) v not f(X)."))
    assert render(out) == "r1: p(X) v not p(X) :- p(X).\nr2: not q(a) :- q(a).\nr3: f(X) v not f(X).\n"


def test_gua_example():
    out = gua(parse_program("q(X) :- f(X,Y).\nf(a,Y) v not f(a,Y)."))
    assert render(out) == (
        f"r1: q(X) :- {GUA_PRED}(X,X), {GUA_PRED}(X,Y), {GUA_PRED}(Y,Y), f(X,Y).\n"
        f"r2: f(a,Y) v not f(a,Y) :- {GUA_PRED}(Y,Y).\n"
        f"r3: {GUA_PRED}(a,a).\n"
    )


def test_gua_adds_square_of_constants():
    p = parse_program("p(a). p(b). p(c). q(X) :- p(X).")
    assert len(guard_facts(p)) == 9
    assert len(gua(parse_program("p(a)."))) == 2


def test_free_choice():
    p = parse_program("q(X) :- f(X,Y).")
    assert render(free_choice(p)) == "r1: q(X) :- f(X,Y).\n#free_f: f(X1,X2) v not f(X1,X2).\n"
    closed = parse_program("q(a). r(X) :- q(X).")
    assert free_choice(closed) == closed


def test_double_negation_example():
    src = parse_program("q(X) :- f(X), forall Y (r(X,Y) => s(Y)).")
    assert check_lite_class(src) == "LITER"
    assert render(double_negation(src)) == "#dn1: #dn1(X) :- r(X,Y), not s(Y).\nr1: q(X) :- not #dn1(X), f(X).\n"


def test_double_negation_leaves_plain_programs_alone():
    p = parse_program("q(X) :- f(X), not r(X).")
    assert double_negation(p) == p


def test_double_negation_rejects_recursion():
    with pytest.raises(UnsupportedError):
        double_negation(parse_program("t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z)."))


def sets(program, universe):
    return {m.atoms for m in enumerate_open_answer_sets(program, universe)}


@settings(max_examples=60)
@given(st.integers(0, 10**9), st.integers(1, 2))
def test_hbg_preserves_answer_sets(seed, extra):
    p = random_program(random.Random(seed), SMALL, ("a",), max_rules=3)
    universe = ["a", "u1", "u2"][: extra + 1]
    assert sets(p, universe) == sets(hbg(p), universe)


@settings(max_examples=60)
@given(st.integers(0, 10**9))
def test_gua_matches_classical_answer_sets(seed):
    p = random_program(random.Random(seed), SMALL, ("a", "b"), max_rules=3)
    if not any(True for r in p.rules for a in r.atoms() for t in a.args if not t.is_var):
        return
    consts = sorted({t.name for r in p.rules for a in r.atoms() for t in a.args if not t.is_var})
    want = {m.atoms for m in classical_answer_sets(p)}
    got = {frozenset(a for a in m.atoms if a.pred != GUA_PRED) for m in enumerate_open_answer_sets(gua(p), consts)}
    assert got == want


@settings(max_examples=40)
@given(st.integers(0, 10**9))
def test_p_program_keeps_satisfiability(seed):
    p = random_program(random.Random(seed), SMALL, ("a",), max_rules=3, glits=True)
    if "p" not in program_signature(p).predicates:
        return
    pp, mapping = to_p_program(p)
    via_p = False
    for k in (0, 1):
        elements = list(program_universe(p, k).elements) if (k or program_signature(p).constants) else []
        if elements:
            goals = mapping.query_atoms("p", elements)
            via_p = via_p or find_open_answer_set(pp, elements + sorted(mapping.special_constants), goals) is not None
        assert (satisfiable_up_to(p, "p", k).status == SAT) == via_p


@given(st.integers(0, 10**9))
def test_guardedness_survives_transformations(seed):
    rng = random.Random(seed)
    p = random_guarded_program(rng, {"p": 2, "s": 1}, ("a",))
    assert "GP" in analyze_program(p).classes
    assert "FGP" in analyze_program(hbg(p)).classes
    assert "LGP" in analyze_program(gua(random_program(rng, SMALL, ("a",)))).classes
    pp, _ = to_p_program(hbg(p))
    assert "FGP" in analyze_program(pp).classes
    loose = random_loosely_guarded_program(rng)
    assert "FLGP" in analyze_program(hbg(loose)).classes


@settings(max_examples=40)
@given(st.integers(0, 10**9))
def test_double_negation_keeps_query_answers(seed):
    p = random_liter_program(random.Random(seed))
    dn = double_negation(p)
    for domain in (["a"], ["a", "b"]):
        for pred in ("h1", "h2"):
            if pred not in {r.head_pos.pred for r in p.rules}:
                continue
            assert eval_query(p, pred, identity_input(domain)) == eval_query(dn, pred, identity_input(domain))
            assert (query_satisfiable(p, pred, domain) is None) == (query_satisfiable(dn, pred, domain) is None)
