import random

from hypothesis import given
from hypothesis import strategies as st

from oasp.generators import random_program
from oasp.grounder import ground, herbrand_base
from oasp.model import OpenInterpretation, Program, Universe, program_signature
from oasp.oracles import brute_answer_sets, herbrand_size, is_answer_set_brute
from oasp.parser import parse_atoms, parse_program
from oasp.semantics import (
    ReductProgram,
    ReductRule,
    commuted_reducts,
    geli_reduct,
    gl_reduct,
    is_answer_set,
    is_open_answer_set,
    least_model,
    reduct_commute_check,
    support_depths,
    t_step,
)

from conftest import atoms

FIXPOINT2 = """
r1: p(X,a) :- not p(X,b), X != a, X != b.
r2: p(X,b) :- not p(X,a), X != a, X != b.
"""

RESTORE = """
r1: restore(X) :- crash(X), y(X,Y), backSucc(Y).
r2: backSucc(X) :- -crash(X), y(X,Y), not backFail(Y).
r3: backFail(X) :- not backSucc(X).
r4: :- y(Y1,X), y(Y2,X), Y1 != Y2.
r5: y(X,Y) v not y(X,Y).
r6: crash(X) v not crash(X).
r7: -crash(X) v not -crash(X).
"""


def interp(universe, text):
    return OpenInterpretation(Universe(tuple(universe)), atoms(text))


def reduct(*rules):
    return ReductProgram(frozenset(ReductRule(h, frozenset(b)) for h, b in rules))


def rendered(prog):
    return sorted(str(r) for r in prog.rules)


def test_geli_expands_true_antecedents():
    g = ground(parse_program("ok :- forall X (critical(X) => work(X))."), ["x0", "x1", "x2"])
    m = interp(["x0", "x1", "x2"], "critical(x0), critical(x2)")
    assert rendered(geli_reduct(g, m)) == ["r1: ok :- work(x0), work(x2)."]


def test_geli_with_antecedent_false_everywhere():
    g = ground(parse_program("ok :- a, forall X (critical(X) => work(X))."), ["x0"])
    assert rendered(geli_reduct(g, interp(["x0"], ""))) == ["r1: ok :- a."]


def test_geli_keeps_only_plain_body_when_no_predecessor():
    p = parse_program("r4: well(Y) :- q(Y), forall X (f(X,Y) => well(X)).")
    g = ground(p, ["x0", "x1"])
    m = interp(["x0", "x1"], "q(x0), f(x0,x1)")
    bodies = {str(r.head_pos): sorted(str(l) for l in r.body) for r in geli_reduct(g, m).rules}
    assert bodies["well(x0)"] == ["q(x0)"]
    assert bodies["well(x1)"] == ["q(x1)", "well(x0)"]


def test_gl_reduct_of_two_choices():
    g = ground(parse_program(FIXPOINT2), ["x", "a", "b"])
    r = gl_reduct(g, atoms("p(x,a)"))
    assert sorted(str(x) for x in r.rules) == ["p(x,a)."]


def test_gl_reduct_without_naf_keeps_rules():
    g = ground(parse_program("q(X) :- p(X)."), ["a"])
    assert sorted(str(x) for x in gl_reduct(g, frozenset()).rules) == ["q(a) :- p(a)."]


def test_gl_reduct_of_free_rule():
    g = ground(parse_program("q(X) v not q(X)."), ["x"])
    assert [str(x) for x in gl_reduct(g, atoms("q(x)")).rules] == ["q(x)."]
    assert len(gl_reduct(g, frozenset())) == 0


def test_t_step_examples():
    a = parse_atoms
    (px,) = a("p(x)")
    (qa,) = a("q(a)")
    (ra,) = a("r(a)")
    assert t_step(reduct((px, [px])), frozenset()) == frozenset()
    assert t_step(reduct((qa, [])), frozenset()) == {qa}
    assert t_step(reduct((qa, []), (ra, [qa])), frozenset({qa})) == {qa, ra}


def test_least_model_examples():
    p1, p2, p3 = (next(iter(parse_atoms(f"p{i}"))) for i in (1, 2, 3))
    (px,) = parse_atoms("p(x)")
    a, b = next(iter(parse_atoms("a"))), next(iter(parse_atoms("b")))
    assert least_model(reduct((p1, []), (p2, [p1]), (p3, [p2]))) == {p1, p2, p3}
    assert least_model(reduct((px, [px]))) == frozenset()
    assert least_model(reduct((a, [b]), (b, [a]))) == frozenset()


def test_is_answer_set_examples():
    g = ground(parse_program(FIXPOINT2), ["x", "a", "b"])
    assert is_answer_set(g, atoms("p(x,a)"))
    assert not is_answer_set(g, atoms("p(x,a), p(x,b)"))
    assert is_answer_set(ground(Program(()), ["x"]), frozenset())
    assert not is_answer_set(ground(parse_program(":- q(a). q(a)."), ["a"]), atoms("q(a)"))


def test_generalized_literal_answer_set():
    p = parse_program("p(X) :- forall Y (q(Y) => r(Y)).\nr(X) :- q(X).\nq(X) v not q(X).")
    assert is_open_answer_set(p, interp(["x", "y"], "p(x), r(x), q(x), p(y)"))
    assert not is_open_answer_set(p, interp(["x", "y"], "p(x), r(x), q(x)"))


def test_restore_has_no_finite_witness():
    from oasp.solver import enumerate_open_answer_sets

    p = parse_program(RESTORE)
    for universe in (["x"], ["x", "y"]):
        for m in enumerate_open_answer_sets(p, universe):
            assert not any(a.pred == "restore" for a in m.atoms)


def test_empty_interpretation_of_a_factless_program():
    p = parse_program("q(X) :- p(X). p(X) :- q(X).")
    assert is_open_answer_set(p, interp(["u"], ""))


def test_reduct_commutation_example():
    p = parse_program("q(x). b(x). b(y). c(x).\nr: a(X) :- forall Z (~q(Z) => b(Z)), not c(X).")
    m = interp(["x", "y"], "q(x), b(x), b(y), c(x), a(y)")
    g = ground(p, m.universe)
    assert reduct_commute_check(g, m)
    first, _ = commuted_reducts(g, m)
    assert sorted(str(r) for r in first.rules) == ["a(y) :- b(y).", "b(x).", "b(y).", "c(x).", "q(x)."]
    from oasp.solver import enumerate_open_answer_sets

    assert [s.atoms for s in enumerate_open_answer_sets(p, m.universe)] == [m.atoms]


def test_commutation_without_naf():
    p = parse_program("q(X) :- forall Y (a(Y) => b(Y)). a(x).")
    m = interp(["x"], "a(x)")
    first, second = commuted_reducts(ground(p, m.universe), m)
    assert first == second


def small_program(seed, glits=False):
    rng = random.Random(seed)
    return random_program(rng, {"p": 1, "q": 1, "s": 1}, ("a",), max_rules=4, n_vars=1, glits=glits)


@given(st.integers(0, 10**9))
def test_answer_sets_agree_with_subset_oracle(seed):
    from oasp.solver import enumerate_open_answer_sets

    p = small_program(seed, glits=True)
    universe = ["a", "u1"]
    assert herbrand_size(p, universe) <= 12
    want = set(brute_answer_sets(p, universe, limit=12))
    got = {m.atoms for m in enumerate_open_answer_sets(p, universe)}
    assert got == want
    for m in got:
        assert is_open_answer_set(p, OpenInterpretation(Universe(tuple(universe)), m))


@given(st.integers(0, 10**9), st.integers(0, 2**12 - 1))
def test_answer_set_check_agrees_with_oracle_on_any_candidate(seed, mask):
    p = small_program(seed, glits=True)
    universe = ["a", "u1"]
    base = sorted(herbrand_base(p, universe))
    candidate = frozenset(a for i, a in enumerate(base) if mask >> i & 1)
    m = OpenInterpretation(Universe(tuple(universe)), candidate)
    assert is_open_answer_set(p, m) == is_answer_set_brute(p, universe, candidate)


@given(st.integers(0, 10**9), st.integers(0, 2**12 - 1), st.integers(0, 2**12 - 1))
def test_t_step_is_monotone(seed, m1, m2):
    p = small_program(seed)
    universe = ["a", "u1"]
    base = sorted(herbrand_base(p, universe))
    small = frozenset(a for i, a in enumerate(base) if m1 >> i & 1 and m2 >> i & 1)
    large = frozenset(a for i, a in enumerate(base) if m1 >> i & 1)
    r = gl_reduct(ground(p, universe), large)
    assert t_step(r, small) <= t_step(r, large)


@given(st.integers(0, 10**9), st.integers(0, 2**12 - 1))
def test_reducts_commute_on_random_programs(seed, mask):
    p = small_program(seed, glits=True)
    universe = ("a", "u1")
    base = sorted(herbrand_base(p, universe))
    m = OpenInterpretation(Universe(universe), frozenset(a for i, a in enumerate(base) if mask >> i & 1))
    assert reduct_commute_check(ground(p, m.universe), m)


@given(st.integers(0, 10**9))
def test_every_answer_set_atom_has_finite_support(seed):
    from oasp.solver import enumerate_open_answer_sets

    p = small_program(seed, glits=True)
    for m in enumerate_open_answer_sets(p, ["a", "u1"]):
        depths = support_depths(p, m)
        assert set(depths) == set(m.atoms)
        assert all(d <= len(m.atoms) for d in depths.values())
