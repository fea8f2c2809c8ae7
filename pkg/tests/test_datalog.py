import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oasp.datalog import (
    InputStructure,
    check_lite_class,
    eval_query,
    identity_input,
    input_structures,
    lfp_model,
    query_satisfiable,
    stratify,
)
from oasp.errors import NotStratifiedError, ProgramError, UnsupportedError
from oasp.generators import random_stratified_program
from oasp.model import OpenInterpretation, Universe
from oasp.parser import parse_atoms, parse_program
from oasp.semantics import is_open_answer_set
from oasp.solver import enumerate_open_answer_sets, find_open_answer_set
from oasp.transforms import extensional_predicates, free_choice

REACH = """
reach(X,Y) :- e(X,Y).
reach(X,Z) :- reach(X,Y), e(Y,Z).
unreach(X,Y) :- node(X), node(Y), not reach(X,Y).
"""


def facts(text):
    return InputStructure(tuple(sorted({t.name for a in parse_atoms(text) for t in a.args})), parse_atoms(text))


def test_two_strata():
    s = stratify(parse_program("q(X) :- b(X).\np(X) :- not q(X), d(X)."))
    assert len(s) == 2
    assert s.levels == {"q": 0, "p": 1}
    assert s.edb(1) == {"q", "d"}


def test_mutual_negation_is_not_stratified():
    with pytest.raises(NotStratifiedError):
        stratify(parse_program("a(X) :- not b(X), d(X).\nb(X) :- not a(X), d(X)."))


def test_antecedent_predicates_sit_lower():
    s = stratify(parse_program("a(X) :- d(X).\nb(X) :- d(X), forall Y (a(Y) => c(Y)).\nc(X) :- d(X)."))
    assert s.levels["a"] < s.levels["b"]
    assert s.levels["c"] <= s.levels["b"]


def test_disjunctive_rules_are_not_datalog():
    with pytest.raises(UnsupportedError):
        stratify(parse_program("p(X) v not p(X)."))


def test_facts_only_program():
    p = parse_program("q(a). q(b). r(a,b).")
    assert eval_query(p, "q", identity_input(["a"])) == {("a",), ("b",)}


def test_reachability():
    m = lfp_model(parse_program(REACH), facts("e(a,b), e(b,c), node(a), node(b), node(c)"))
    assert m.relation("reach") == {("a", "b"), ("b", "c"), ("a", "c")}
    assert ("c", "a") in m.relation("unreach") and ("a", "c") not in m.relation("unreach")


def test_generalized_literal_with_empty_antecedent():
    p = parse_program("ok(X) :- d(X), forall Y (crit(Y) => work(Y)).")
    assert eval_query(p, "ok", facts("d(a)")) == {("a",)}
    assert eval_query(p, "ok", facts("d(a), crit(b)")) == set()
    assert eval_query(p, "ok", facts("d(a), crit(b), work(b)")) == {("a",)}


def test_unknown_query_predicate():
    with pytest.raises(ProgramError):
        eval_query(parse_program("q(a)."), "zzz", identity_input(["a"]))


def test_input_structures_reject_equality_and_arity_clashes():
    from oasp.model import Term, eq_atom

    with pytest.raises(ProgramError):
        InputStructure(("a",), frozenset({eq_atom(Term("a"), Term("a"))}))
    with pytest.raises(ProgramError):
        InputStructure(("a",), parse_atoms("p(a)") | parse_atoms("p(a,a)"))


def test_strata_grow_monotonically():
    trace = []
    lfp_model(parse_program(REACH), facts("e(a,b), node(a), node(b)"), trace)
    assert [i for i, _ in trace] == [0, 1]


def test_lite_classes():
    assert check_lite_class(parse_program("q(X) :- f(X), forall Y (r(X,Y) => s(Y)).")) == "LITER"
    assert check_lite_class(parse_program("t(X,Y) :- e(X,Y).\nt(X,Y) :- t(X,Y), e(X,Y).")) == "LITEM"
    assert check_lite_class(parse_program("q(X) :- not r(X).\nr(X) :- a(X).")) == "LITE"
    assert check_lite_class(parse_program("a(X) :- not b(X), d(X).\nb(X) :- not a(X), d(X).")) is None


def test_transitive_closure_is_not_lite():
    assert check_lite_class(parse_program("t(X,Y) :- e(X,Y).\nt(X,Y) :- e(X,Z), t(Z,Y).")) is None


def stratified(seed):
    rng = random.Random(seed)
    return random_stratified_program(rng, {"e": 2, "f": 1}, {"h": 1, "k": 1}, max_rules=3)


@settings(max_examples=40)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_unique_answer_set_is_the_least_model(seed, size):
    p = stratified(seed)
    domain = ("a", "b", "c")[:size]
    model = lfp_model(p, identity_input(domain))
    found = enumerate_open_answer_sets(p, domain)
    assert [m.atoms for m in found] == [model.facts]


@settings(max_examples=30)
@given(st.integers(0, 10**9))
def test_query_satisfiability_matches_free_choice(seed):
    p = stratified(seed)
    with_inputs = free_choice(p)
    for pred in sorted({r.head_pos.pred for r in p.rules}):
        for domain in (("a",), ("a", "b")):
            direct = query_satisfiable(p, pred, domain) is not None
            goals = [a for a in _atoms(pred, domain)]
            via_answer_sets = find_open_answer_set(with_inputs, domain, goals) is not None
            assert direct == via_answer_sets


def _atoms(pred, domain):
    from oasp.model import Atom, Term

    return [Atom(pred, (Term(d),)) for d in domain]


def test_input_enumeration_count():
    assert sum(1 for _ in input_structures(("a", "b"), {"e": 2, "f": 1})) == 64
    assert extensional_predicates(parse_program(REACH)) == {"e": 2, "node": 1}
