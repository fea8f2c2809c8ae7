import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oasp.errors import ResourceError, UniverseError
from oasp.generators import random_program
from oasp.model import OpenInterpretation, Program, Universe
from oasp.oracles import brute_answer_sets
from oasp.parser import parse_program
from oasp.semantics import is_open_answer_set
from oasp.solver import (
    SAT,
    UNKNOWN,
    UNSAT_UP_TO_BOUND,
    Budget,
    classical_answer_sets,
    enumerate_open_answer_sets,
    find_open_answer_set,
    satisfiable_up_to,
)

from conftest import atoms
from test_semantics import FIXPOINT2, RESTORE

INFINITE = """
r1: q(X) :- f(X,Y).
r2: :- f(X,Y), not q(Y).
r3: :- f(X,Y), not well(Y).
r4: well(Y) :- q(Y), forall X (f(X,Y) => well(X)).
r5: f(X,Y) v not f(X,Y).
"""

PPROG = """
q(X) :- forall Y (r(Y) => s(X)).
r(a).
s(X) v not s(X).
"""


def sets(program, universe, **kw):
    return [m.atoms for m in enumerate_open_answer_sets(program, universe, **kw)]


def test_two_choices():
    assert sets(parse_program(FIXPOINT2), ["x", "a", "b"]) == [atoms("p(x,a)"), atoms("p(x,b)")]


def test_self_support_and_empty_program():
    assert sets(parse_program("p(X) :- p(X)."), ["x"]) == [frozenset()]
    assert sets(Program(()), ["x"]) == [frozenset()]


def test_small_witness_for_generalized_literal():
    p = parse_program(PPROG)
    res = satisfiable_up_to(p, "q", 1)
    assert res.status == SAT
    assert any(a.pred == "q" for a in res.witness.atoms)
    assert is_open_answer_set(p, res.witness)
    shown = OpenInterpretation(Universe(("a", "x")), atoms("s(x), r(a), q(x)"))
    assert is_open_answer_set(p, shown)


@pytest.mark.parametrize("text, pred", [(INFINITE, "q"), (RESTORE, "restore")])
def test_infinite_only_predicates_are_unsat_up_to_bound(text, pred):
    res = satisfiable_up_to(parse_program(text), pred, 3)
    assert res.status == UNSAT_UP_TO_BOUND
    assert res.witness is None and res.bound_reached == 3


def test_missing_predicate():
    assert satisfiable_up_to(parse_program("p(a)."), "zzz", 2).status == UNSAT_UP_TO_BOUND


def test_free_predicate_query():
    res = satisfiable_up_to(parse_program("p(X) v not p(X)."), "p", 1)
    assert res.status == SAT
    assert {a.pred for a in res.witness.atoms} == {"p"}


def test_budget_exhaustion_is_unknown():
    res = satisfiable_up_to(parse_program(INFINITE), "q", 3, Budget(max_nodes=5))
    assert res.status == UNKNOWN


def test_atom_budget_raises():
    with pytest.raises(ResourceError):
        enumerate_open_answer_sets(parse_program(INFINITE), ["a", "b", "c"], Budget(max_atoms=4))


def test_budget_reads_environment(monkeypatch):
    monkeypatch.setenv("OASP_BUDGET", "77")
    assert Budget.default().max_nodes == 77


def test_goal_directed_search():
    p = parse_program("p(X) v not p(X).")
    found = find_open_answer_set(p, ["a", "b"], atoms("p(b)"))
    assert found is not None and atoms("p(b)") <= found.atoms


def test_classical_answer_sets():
    p = parse_program("q(X) :- f(X,Y).\nf(a,Y) v not f(a,Y).")
    assert [m.atoms for m in classical_answer_sets(p)] == [frozenset(), atoms("f(a,a), q(a)")]
    assert [m.atoms for m in classical_answer_sets(parse_program("q(a)."))] == [atoms("q(a)")]
    assert classical_answer_sets(parse_program(":- q(a). q(a).")) == []
    with pytest.raises(UniverseError):
        classical_answer_sets(parse_program("p(X) :- p(X)."))


def test_isomorphism_pruning_keeps_one_representative():
    p = parse_program("p(X) v not p(X).")
    everything = sets(p, ["u1", "u2"])
    pruned = sets(p, ["u1", "u2"], up_to_iso=True)
    assert len(everything) == 4
    assert pruned == [frozenset(), atoms("p(u1)"), atoms("p(u1), p(u2)")]


def rename(m, mapping):
    from oasp.model import Atom, Term

    return frozenset(Atom(a.pred, tuple(Term(mapping.get(t.name, t.name)) for t in a.args)) for a in m)


@given(st.integers(0, 10**9))
def test_answer_sets_are_closed_under_renaming_anonymous_elements(seed):
    p = random_program(random.Random(seed), {"p": 1, "q": 2}, ("a",), max_rules=3)
    found = set(sets(p, ["a", "u1", "u2"], budget=Budget(max_atoms=20)))
    swapped = {rename(m, {"u1": "u2", "u2": "u1"}) for m in found}
    assert swapped == found


@given(st.integers(0, 10**9))
def test_solver_agrees_with_subset_oracle(seed):
    p = random_program(random.Random(seed), {"p": 1, "q": 2}, ("a",), max_rules=3, glits=True)
    universe = ["a", "u1"]
    assert set(sets(p, universe)) == set(brute_answer_sets(p, universe, limit=12))


@given(st.integers(0, 10**9))
def test_witnesses_are_sound(seed):
    p = random_program(random.Random(seed), {"p": 1, "q": 2}, ("a",), max_rules=3, glits=True)
    res = satisfiable_up_to(p, "p", 1)
    if res.status == SAT:
        assert is_open_answer_set(p, res.witness)
        assert any(a.pred == "p" for a in res.witness.atoms)
