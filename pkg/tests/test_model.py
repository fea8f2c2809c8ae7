import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oasp.errors import ArityError, ProgramError, UnboundVariableError
from oasp.model import (
    Atom,
    BAnd,
    BNot,
    BOr,
    Literal,
    OpenInterpretation,
    Program,
    Rule,
    Term,
    Universe,
    eq_atom,
    is_free_rule,
    naf,
    negative_part,
    pos,
    positive_part,
    program_signature,
    satisfies,
)
from oasp.parser import parse_program, parse_rule

from conftest import atoms

X, Y, Z = (Term(n, True) for n in "XYZ")


def at(pred, *names):
    return Atom(pred, tuple(Term(n, n[0].isupper()) for n in names))


def test_positive_and_negative_part_of_equalities():
    lits = {naf(eq_atom(X, Y)), pos(eq_atom(Y, Z))}
    assert positive_part(lits) == {eq_atom(Y, Z)}
    assert negative_part(lits) == {eq_atom(X, Y)}


def test_parts_of_empty_and_one_sided_sets():
    assert positive_part(set()) == set() == negative_part(set())
    assert positive_part({naf(at("p", "a")), naf(at("q", "b"))}) == set()
    assert negative_part({pos(at("p", "a")), pos(at("q", "b"))}) == set()


literal_sets = st.sets(
    st.builds(
        Literal,
        st.builds(lambda p, a: at(p, a), st.sampled_from("pqr"), st.sampled_from(["a", "b", "X"])),
        st.booleans(),
    ),
    max_size=6,
)


@given(literal_sets)
def test_parts_partition_the_literals(lits):
    plus, minus = positive_part(lits), negative_part(lits)
    assert {pos(a) for a in plus} | {naf(a) for a in minus} == lits
    assert len(plus) + len(minus) == len(lits)


def test_free_rule_detection():
    assert is_free_rule(parse_rule("f(X,Y) v not f(X,Y)."))
    assert not is_free_rule(parse_rule("q(X) :- p(X)."))
    assert not is_free_rule(parse_rule("q(X) v not r(X)."))


def test_satisfies_examples():
    u = Universe(("a", "x"))
    assert satisfies(OpenInterpretation(u, atoms("q(a)")), pos(at("q", "a")))
    assert satisfies(OpenInterpretation(u, frozenset()), parse_rule(":- q(a)."))
    contradiction = BAnd((BNot(at("q", "x")), at("q", "x")))
    assert not satisfies(OpenInterpretation(u, atoms("q(x)")), contradiction)


def test_satisfies_needs_ground_items():
    with pytest.raises(UnboundVariableError):
        satisfies(OpenInterpretation(Universe(("a",)), frozenset()), pos(at("q", "X")))


def test_constraint_truth_follows_body():
    rule = parse_rule(":- q(a), not r(a).")
    u = Universe(("a",))
    assert not satisfies(OpenInterpretation(u, atoms("q(a)")), rule)
    assert satisfies(OpenInterpretation(u, atoms("q(a), r(a)")), rule)


BASE = [at("p", "a"), at("q", "a"), at("r", "a")]


def truth_table(f, true_atoms):
    if isinstance(f, Atom):
        return f in true_atoms
    if isinstance(f, BNot):
        return not truth_table(f.arg, true_atoms)
    if isinstance(f, BAnd):
        return all(truth_table(g, true_atoms) for g in f.args)
    return any(truth_table(g, true_atoms) for g in f.args)


formulas = st.recursive(
    st.sampled_from(BASE),
    lambda inner: st.one_of(
        st.builds(BNot, inner),
        st.builds(lambda a, b: BAnd((a, b)), inner, inner),
        st.builds(lambda a, b: BOr((a, b)), inner, inner),
    ),
    max_leaves=6,
)


@given(formulas)
def test_satisfies_matches_truth_table(f):
    u = Universe(("a",))
    for bits in itertools.product([False, True], repeat=len(BASE)):
        true_atoms = frozenset(a for a, b in zip(BASE, bits) if b)
        assert satisfies(OpenInterpretation(u, true_atoms), f) == truth_table(f, true_atoms)


RESTORE_RULE = "r1: restore(X) :- crash(X), y(X,Y), backSucc(Y).\nr5: y(X,Y) v not y(X,Y)."


def test_signature_of_restore_rules():
    sig = program_signature(parse_program(RESTORE_RULE))
    assert sig.predicates == {"restore": 1, "crash": 1, "y": 2, "backSucc": 1}
    assert {v.name for v in sig.variables} == {"X", "Y"}
    assert not sig.constants


def test_signature_of_empty_program():
    sig = program_signature(Program(()))
    assert not sig.constants and not sig.variables and not sig.predicates


def test_arity_conflict():
    with pytest.raises(ArityError):
        Program((Rule((pos(at("p", "a", "b")),)), Rule((pos(at("p", "c")),))))


def test_predicate_and_constant_names_are_disjoint():
    with pytest.raises(ProgramError):
        Program((Rule((pos(at("p", "q")),)), Rule((pos(at("q", "a")),))))


def test_rule_invariants():
    with pytest.raises(ProgramError):
        Rule((pos(at("p", "a")), pos(at("q", "a"))))
    with pytest.raises(ProgramError):
        Rule((pos(eq_atom(Term("a"), Term("b"))),))
    with pytest.raises(ProgramError):
        Atom("=", (Term("a"),))


def test_universe_is_non_empty():
    with pytest.raises(Exception):
        Universe(())
