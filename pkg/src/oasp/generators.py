"""Seeded random programs for property checks and the acceptance harness."""

from __future__ import annotations

import random
from typing import Sequence

from .model import (
    Atom,
    BAnd,
    BNot,
    GeneralizedLiteral,
    Literal,
    Program,
    Rule,
    Term,
    eq_atom,
    naf,
    pos,
)

VARS = tuple(Term(n, True) for n in ("X", "Y", "Z"))


def _atom(rng: random.Random, preds: dict[str, int], terms: Sequence[Term]) -> Atom:
    name = rng.choice(sorted(preds))
    return Atom(name, tuple(rng.choice(terms) for _ in range(preds[name])))


def random_glit(rng: random.Random, preds: dict[str, int], terms: Sequence[Term], bound: Term) -> GeneralizedLiteral:
    pool = list(terms) + [bound]
    ante = _atom(rng, preds, pool)
    if bound not in ante.args:
        args = list(ante.args) or []
        if args:
            args[rng.randrange(len(args))] = bound
            ante = Atom(ante.pred, tuple(args))
    if rng.random() < 0.3:
        other = _atom(rng, preds, pool)
        ante = BAnd((ante, BNot(other) if rng.random() < 0.5 else other))
    return GeneralizedLiteral((bound,), ante, _atom(rng, preds, pool))


def random_rule(
    rng: random.Random,
    preds: dict[str, int],
    consts: Sequence[str] = (),
    n_vars: int = 2,
    glits: bool = False,
    equality: bool = True,
    max_body: int = 3,
) -> Rule:
    terms = list(VARS[:n_vars]) + [Term(c) for c in consts]
    kind = rng.random()
    if kind < 0.15:
        a = _atom(rng, preds, terms)
        return Rule((pos(a), naf(a)))
    head: list[Literal] = []
    if kind < 0.85:
        head.append(pos(_atom(rng, preds, terms)))
    if rng.random() < 0.2:
        head.append(naf(_atom(rng, preds, terms)))
    body: list[Literal] = []
    for _ in range(rng.randint(0 if head else 1, max_body)):
        body.append(Literal(_atom(rng, preds, terms), rng.random() < 0.35))
    if equality and n_vars and rng.random() < 0.2:
        left = rng.choice(terms)
        body.append(Literal(eq_atom(left, rng.choice(terms)), rng.random() < 0.6))
    gl = []
    if glits and rng.random() < 0.5:
        bound = VARS[n_vars] if n_vars < len(VARS) else VARS[-1]
        gl.append(random_glit(rng, preds, [t for t in terms if t != bound], bound))
    return Rule(tuple(head), tuple(body), tuple(gl))


def random_program(
    rng: random.Random,
    preds: dict[str, int] | None = None,
    consts: Sequence[str] = ("a",),
    max_rules: int = 3,
    n_vars: int = 2,
    glits: bool = False,
    equality: bool = True,
) -> Program:
    preds = preds or {"p": 1, "q": 2}
    n = rng.randint(1, max_rules)
    return Program(tuple(random_rule(rng, preds, consts, n_vars, glits, equality) for _ in range(n)))


def random_guarded_rule(
    rng: random.Random,
    preds: dict[str, int],
    consts: Sequence[str] = (),
    glits: bool = False,
) -> Rule:
    """A rule whose first positive body atom mentions every variable of the rule."""
    guard_pred = max(sorted(preds), key=lambda p: preds[p])
    arity = preds[guard_pred]
    guard_vars = list(VARS[: max(1, min(arity, 2))])
    guard_args = [guard_vars[i % len(guard_vars)] for i in range(arity)]
    rng.shuffle(guard_args)
    guard = Atom(guard_pred, tuple(guard_args))
    present = sorted(guard.variables())
    terms = present + [Term(c) for c in consts]
    if not present:
        terms = [Term(c) for c in consts] or [VARS[0]]
    head: list[Literal] = []
    if rng.random() < 0.8:
        head.append(pos(_atom(rng, preds, terms)))
    if rng.random() < 0.25:
        head.append(naf(_atom(rng, preds, terms)))
    body = [pos(guard)]
    for _ in range(rng.randint(0, 2)):
        body.append(Literal(_atom(rng, preds, terms), rng.random() < 0.4))
    gl = []
    if glits and rng.random() < 0.6:
        bound = VARS[2]
        g_args = list(guard_args)
        g_args[rng.randrange(len(g_args))] = bound
        g_guard = Atom(guard_pred, tuple(g_args))
        inner = sorted(g_guard.variables())
        ante = g_guard
        if rng.random() < 0.3:
            ante = BAnd((g_guard, BNot(_atom(rng, preds, inner))))
        gl.append(GeneralizedLiteral((bound,), ante, _atom(rng, preds, inner)))
    return Rule(tuple(head), tuple(body), tuple(gl))


def random_guarded_program(
    rng: random.Random,
    preds: dict[str, int] | None = None,
    consts: Sequence[str] = (),
    max_rules: int = 3,
    glits: bool = False,
    free_rules: bool = True,
) -> Program:
    preds = preds or {"p": 2}
    rules = [random_guarded_rule(rng, preds, consts, glits) for _ in range(rng.randint(1, max_rules))]
    if free_rules and rng.random() < 0.6:
        name = rng.choice(sorted(preds))
        args = tuple(VARS[: preds[name]])
        rules.append(Rule((pos(Atom(name, args)), naf(Atom(name, args)))))
    return Program(tuple(rules))


def random_loosely_guarded_program(rng: random.Random, max_rules: int = 2) -> Program:
    """Triangle-style rules over a binary predicate: pairwise but not single guards."""
    x, y, z = VARS
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        guards = [pos(Atom("p", (x, y))), pos(Atom("p", (y, z))), pos(Atom("p", (x, z)))]
        head = [pos(Atom("p", rng.choice([(x, z), (z, x), (x, x), (y, y)])))]
        extra = [Literal(Atom("p", rng.choice([(x, y), (z, y), (y, x)])), True)] if rng.random() < 0.5 else []
        rules.append(Rule(tuple(head), tuple(guards + extra)))
    if rng.random() < 0.5:
        rules.append(Rule((pos(Atom("p", (x, y))), naf(Atom("p", (x, y))))))
    return Program(tuple(rules))


def random_stratified_program(
    rng: random.Random,
    edb: dict[str, int],
    idb: dict[str, int],
    consts: Sequence[str] = (),
    max_rules: int = 4,
    glits: bool = True,
) -> Program:
    """Layered rules: each idb predicate uses edb and earlier idb predicates, with
    positive recursion on itself allowed."""
    order = sorted(idb)
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        level = rng.randrange(len(order))
        head_pred = order[level]
        lower = {**edb, **{p: idb[p] for p in order[:level]}}
        head_vars = list(VARS[: idb[head_pred]])
        extra_var = VARS[len(head_vars)] if len(head_vars) < len(VARS) else VARS[-1]
        terms = head_vars + [extra_var] + [Term(c) for c in consts]
        head = Atom(head_pred, tuple(head_vars))
        body = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.2:
                body.append(pos(Atom(head_pred, tuple(rng.choice(terms) for _ in head_vars))))
            else:
                body.append(Literal(_atom(rng, lower, terms), rng.random() < 0.3))
        gl = []
        if glits and rng.random() < 0.4:
            bound = Term("W", True)
            gpool = terms + [bound]
            ante = _atom(rng, lower, gpool)
            gl.append(GeneralizedLiteral((bound,), ante, _atom(rng, lower | {head_pred: idb[head_pred]}, gpool)))
        rules.append(Rule((pos(head),), tuple(body), tuple(gl)))
    return Program(tuple(rules))


def random_liter_program(rng: random.Random, max_rules: int = 3) -> Program:
    """Recursion-free guarded programs with Datalog LITE generalized literals."""
    x, y = VARS[0], VARS[1]
    edb = {"e": 2, "f": 1}
    rules = []
    heads = ["h1", "h2"]
    for i in range(rng.randint(1, max_rules)):
        head_pred = heads[min(i, 1)]
        lower = dict(edb)
        if head_pred == "h2" and any(r.head_pos.pred == "h1" for r in rules):
            lower["h1"] = 1
        guard = pos(Atom("e", (x, y))) if rng.random() < 0.6 else pos(Atom("f", (x,)))
        gvars = sorted(guard.atom.variables())
        body = [guard]
        if rng.random() < 0.5:
            p = rng.choice(sorted(lower))
            body.append(Literal(Atom(p, tuple(rng.choice(gvars) for _ in range(lower[p]))), rng.random() < 0.5))
        gl = []
        if rng.random() < 0.7:
            bound = Term("Z", True)
            ante = Atom("e", (x, bound)) if rng.random() < 0.5 else Atom("e", (bound, x))
            cons_pred = rng.choice([p for p in sorted(lower) if lower[p] == 1])
            gl.append(GeneralizedLiteral((bound,), ante, Atom(cons_pred, (rng.choice([x, bound]),))))
        rules.append(Rule((pos(Atom(head_pred, (x,))),), tuple(body), tuple(gl)))
    return Program(tuple(rules))
