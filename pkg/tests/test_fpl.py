import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oasp.acceptance import completion_mismatch
from oasp.errors import ProgramError
from oasp.fpl import (
    build_comp,
    build_compg,
    build_gcomp,
    build_gcompg,
    eliminate_gfp,
    enumerate_models,
    evaluate,
    formula_class,
    parse_formulas,
    render_all,
)
from oasp.fpl.evaluate import FiniteStructure, all_structures
from oasp.fpl.formula import Fix, Not, PVar, Rel
from oasp.generators import random_program
from oasp.model import Program, Term
from oasp.parser import parse_program
from oasp.transforms import hbg, to_p_program

from test_guardedness import INFINITE

GOLDEN = Path(__file__).parent / "golden"
SELF_SUPPORT = "r: p(X) :- p(X)."
TWO_CHOICE = "r1: p(X,a) :- not p(X,b), X != a, X != b.\nr2: p(X,b) :- not p(X,a), X != a, X != b."
GUARDED_GLIT = "r: p(X) v not p(X) :- p(X), forall Y (p(Y) & p(b) => p(a))."

INFINITY_AXIOM = """exists X,Y (f(X,Y))
forall X,Y (f(X,Y) -> exists Z (f(Y,Z)))
forall X,Y (f(X,Y) -> [LFP W(X). forall Y (f(Y,X) -> W(Y))](X))
"""


def infinity_p_program():
    pp, _ = to_p_program(hbg(parse_program(INFINITE)))
    return pp


def golden(name):
    return (GOLDEN / name).read_text()


@pytest.mark.parametrize(
    "name, build",
    [
        ("comp_fixpoint.txt", lambda: build_comp(parse_program(SELF_SUPPORT))),
        ("gcomp_fixpoint.txt", lambda: build_gcomp(parse_program(SELF_SUPPORT))),
        ("comp_two_choice.txt", lambda: build_comp(parse_program(TWO_CHOICE))),
        ("compg_infinity.txt", lambda: build_compg(infinity_p_program())),
        ("gcompg_infinity.txt", lambda: build_gcompg(infinity_p_program())),
        ("gcompg_guarded_glit.txt", lambda: build_gcompg(parse_program(GUARDED_GLIT))),
    ],
)
def test_completion_matches_golden(name, build):
    assert build().render() == golden(name)


def test_fixpoint_operator_of_self_support():
    last = build_comp(parse_program(SELF_SUPPORT)).render().splitlines()[-1]
    assert "W(X1) | exists X (X1 = X & W(X) & #r(X))" in last
    guarded = build_gcomp(parse_program(SELF_SUPPORT)).render().splitlines()[-1]
    assert "W(X1) | W(X1) & #r(X1)" in guarded


def test_two_choice_reduct_definition():
    lines = build_comp(parse_program(TWO_CHOICE)).render().splitlines()
    assert "forall X (#r1(X) <-> X != a & X != b & ~p(X,b))" in lines


def test_empty_program_has_false_operator():
    assert build_comp(Program(()), "p", 1).render().splitlines() == [
        "exists X1 (true)",
        "forall X1 (p(X1) -> [LFP W(X1). W(X1) | false](X1))",
    ]


def test_generalized_literal_definitions():
    text = build_compg(infinity_p_program()).render()
    assert "forall X,Y (#g1(X,Y) <-> #p(X,Y,f) & X != #0 & X != f & X != q & X != well)" in text
    assert "forall X (#g1(X,Y) -> W(X,#0,well))" in text
    assert "forall Y (p(Y) -> #g1(Y) | ~p(b))" in build_gcompg(parse_program(GUARDED_GLIT)).render()


def test_compg_without_generalized_literals_is_comp():
    p = parse_program(TWO_CHOICE)
    assert build_compg(p).render() == build_comp(p).render()


def test_free_rules_drop_out_of_guarded_satisfaction():
    p = hbg(parse_program("r1: p(X) :- p(X).\nr2: p(X) v not p(X)."))
    sat_lines = [l for l in build_gcomp(p).render().splitlines() if l.startswith("forall X (p(X) -> p(X) | ~p(X))")]
    assert len(sat_lines) == 1


def test_unguarded_program_rejected_by_guarded_builders():
    with pytest.raises(Exception):
        build_gcomp(parse_program("r: p(X) :- p(Y)."))


def test_classification():
    axiom = parse_formulas(INFINITY_AXIOM)
    cls = formula_class(axiom)
    assert cls.fragment == "muGF" and cls.alternation_free
    loose = parse_formulas("exists X,Y (le(X,Y) & phi(Y) & forall Z (le(X,Z) & lt(Z,Y) -> psi(Z)))")
    assert formula_class(loose).fragment == "LGF"
    assert formula_class(parse_formulas("forall X,Y (p(X) -> q(Y))")).fragment is None
    guarded = build_gcompg(infinity_p_program()).formulas
    assert str(formula_class(guarded)) == "muGF (alternation-free)"


def test_infinity_axiom_fails_on_a_cycle():
    cycle = FiniteStructure(("a", "b", "c"), {"f": frozenset({("a", "b"), ("b", "c"), ("c", "a")})})
    assert [evaluate(f, cycle) for f in parse_formulas(INFINITY_AXIOM)] == [True, True, False]


def test_infinity_axiom_has_no_small_models():
    for n in (1, 2, 3):
        assert list(enumerate_models(parse_formulas(INFINITY_AXIOM), ("a", "b", "c")[:n], {"f": 2})) == []


def test_existential_equality():
    (f,) = parse_formulas("exists X (X = X)")
    for n in (1, 2, 3):
        assert evaluate(f, FiniteStructure(tuple("abc"[:n]), {}))


def test_two_choice_fixpoint_rejects_both_atoms():
    comp = build_comp(parse_program(TWO_CHOICE))
    fpf = comp.formulas[-1]
    both = FiniteStructure(("x", "a", "b"), {"p": frozenset({("x", "a"), ("x", "b")}), "#r1": frozenset(), "#r2": frozenset()})
    one = FiniteStructure(("x", "a", "b"), {"p": frozenset({("x", "a")}), "#r1": frozenset({("x",)}), "#r2": frozenset()})
    trace = []
    assert not evaluate(fpf, both, trace=trace)
    assert trace and all(not stage for _, _, chain in trace for stage in chain)
    assert evaluate(fpf, one)


def test_lfp_approximants_ascend():
    (f,) = parse_formulas("forall X (p(X) -> [LFP W(X). s(X) | exists Y (e(Y,X) & W(Y))](X))")
    s = FiniteStructure(
        ("a", "b", "c", "d"),
        {"p": frozenset({("d",)}), "s": frozenset({("a",)}), "e": frozenset({("a", "b"), ("b", "c"), ("c", "d")})},
    )
    trace = []
    assert evaluate(f, s, trace=trace)
    for _, kind, chain in trace:
        assert kind == "lfp"
        assert all(x <= y for x, y in zip(chain, chain[1:]))
        assert len(chain) <= len(s.domain) + 1


def test_gfp_elimination_shape_and_lfp_identity():
    (g,) = parse_formulas("forall X (p(X) -> [GFP W(X). p(X) & exists Y (e(X,Y) & W(Y))](X))")
    assert render_all([eliminate_gfp(g)]).strip() == (
        "forall X (p(X) -> ~[LFP W(X). ~(p(X) & exists Y (e(X,Y) & ~W(Y)))](X))"
    )
    (l,) = parse_formulas(INFINITY_AXIOM.splitlines()[2])
    assert eliminate_gfp(l) == l


def test_gfp_elimination_agrees_on_small_structures():
    (g,) = parse_formulas("forall X (p(X) -> [GFP W(X). p(X) & exists Y (e(X,Y) & W(Y))](X))")
    h = eliminate_gfp(g)
    for s in all_structures(("a", "b"), {"p": 1, "e": 2}):
        assert evaluate(g, s) == evaluate(h, s)


def test_fixed_points_reject_negative_occurrences_and_loose_variables():
    x, y = Term("X", True), Term("Y", True)
    with pytest.raises(ProgramError):
        Fix("lfp", "W", (x,), Not(PVar("W", (x,))), (x,))
    with pytest.raises(ProgramError):
        Fix("lfp", "W", (x,), Rel("e", (x, y)), (x,))


@settings(max_examples=40)
@given(st.integers(0, 10**9), st.booleans(), st.sampled_from([("a",), ("u1", "u2"), ("a", "u1")]))
def test_answer_sets_correspond_to_completion_models(seed, glits, universe):
    rng = random.Random(seed)
    consts = ["a"] if "a" in universe else []
    p = random_program(rng, {"p": 1}, consts, max_rules=3, glits=glits)
    if any(t.name not in universe for r in p.rules for t in r.constants()):
        return
    assert completion_mismatch(p, list(universe), glits) is None


@settings(max_examples=20)
@given(st.integers(0, 10**9))
def test_guarded_completion_is_equivalent_on_two_elements(seed):
    from oasp.generators import random_guarded_program

    p = hbg(random_guarded_program(random.Random(seed), {"p": 1}, max_rules=2, glits=True))
    plain, guarded = build_compg(p), build_gcompg(p)
    cls = formula_class(guarded.formulas)
    assert cls.fragment in ("GF", "muGF") and cls.alternation_free
    vocab = plain.vocabulary()
    for s in all_structures(("u1", "u2"), vocab):
        assert all(evaluate(f, s) for f in plain.formulas) == all(evaluate(f, s) for f in guarded.formulas)


def test_completion_size_is_quadratic_in_program_size():
    for n in (2, 4, 8):
        rules = "\n".join(f"r{i}: p(X) :- p(X), not p(c{i})." for i in range(n))
        comp = build_comp(parse_program(rules))
        assert len(comp.render()) <= 400 * n * n
