"""Brute-force reference procedures used to cross-check the real implementations.

Nothing here shares code with the grounder, the reduct functions or the
solver: grounding, the reducts and the least model are re-derived directly
from their definitions, and candidate interpretations are plain subsets of the
Herbrand base.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .model import Atom, BAnd, BNot, BOr, Program, Term


def _subst(atom: Atom, env: dict) -> Atom:
    return Atom(atom.pred, tuple(env.get(t, t) for t in atom.args))


def _true(atom: Atom, interp: frozenset) -> bool:
    if atom.is_equality:
        return atom.args[0] == atom.args[1]
    return atom in interp


def _eval(f, env: dict, interp: frozenset) -> bool:
    if isinstance(f, Atom):
        return _true(_subst(f, env), interp)
    if isinstance(f, BNot):
        return not _eval(f.arg, env, interp)
    if isinstance(f, BAnd):
        return all(_eval(g, env, interp) for g in f.args)
    if isinstance(f, BOr):
        return any(_eval(g, env, interp) for g in f.args)
    raise TypeError(f)


def _base(program: Program, elems: list[Term]) -> list[Atom]:
    arities: dict[str, int] = {}
    for r in program.rules:
        for a in r.atoms():
            if not a.is_equality:
                arities[a.pred] = a.arity
    return sorted(
        Atom(p, combo) for p, n in sorted(arities.items()) for combo in itertools.product(elems, repeat=n)
    )


def _reduct(program: Program, elems: list[Term], interp: frozenset):
    """Definite rules and constraints of the combined reduct, as (head, body) pairs."""
    out = []
    for r in program.rules:
        names = sorted(r.variables())
        for combo in itertools.product(elems, repeat=len(names)):
            env = dict(zip(names, combo))
            if not all(_true(_subst(a, env), interp) for a in r.head_neg):
                continue
            if any(_true(_subst(a, env), interp) for a in r.body_neg):
                continue
            body = [_subst(a, env) for a in r.body_pos]
            for g in r.glits:
                for inner in itertools.product(elems, repeat=len(g.bound)):
                    genv = dict(env)
                    genv.update(zip(g.bound, inner))
                    if _eval(g.antecedent, genv, interp):
                        body.append(_subst(g.consequent, genv))
            if any(a.is_equality and a.args[0] != a.args[1] for a in body):
                continue
            body = frozenset(a for a in body if not a.is_equality)
            head = _subst(r.head_pos, env) if r.head_pos is not None else None
            out.append((head, body))
    return out


def _minimal_model(rules) -> frozenset:
    model: set = set()
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head is not None and head not in model and body <= model:
                model.add(head)
                changed = True
    return frozenset(model)


def is_answer_set_brute(program: Program, universe: Iterable[str], interp: frozenset) -> bool:
    elems = [Term(e) for e in universe]
    rules = _reduct(program, elems, frozenset(interp))
    if _minimal_model(rules) != frozenset(interp):
        return False
    return not any(head is None and body <= interp for head, body in rules)


def brute_answer_sets(program: Program, universe: Iterable[str], limit: int = 16) -> list[frozenset]:
    """Every subset of the Herbrand base that is an answer set."""
    universe = list(universe)
    elems = [Term(e) for e in universe]
    base = _base(program, elems)
    if len(base) > limit:
        raise ValueError(f"Herbrand base of {len(base)} atoms exceeds the brute-force limit {limit}")
    found = []
    for mask in range(1 << len(base)):
        interp = frozenset(a for i, a in enumerate(base) if mask >> i & 1)
        if is_answer_set_brute(program, universe, interp):
            found.append(interp)
    return found


def herbrand_size(program: Program, universe: Iterable[str]) -> int:
    return len(_base(program, [Term(e) for e in universe]))
