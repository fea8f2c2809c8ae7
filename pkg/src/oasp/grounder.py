"""Naive grounding over an explicit universe."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ResourceError, UniverseError
from .model import (
    Atom,
    Program,
    Rule,
    Term,
    Universe,
    eq_atom,
    naf,
    program_signature,
)


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple[Rule, ...]
    universe: Universe

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def rule_set(self) -> frozenset:
        return frozenset(r.structure() for r in self.rules)


def as_universe(universe: Universe | Iterable[str]) -> Universe:
    return universe if isinstance(universe, Universe) else Universe(tuple(universe))


def check_universe(program: Program, universe: Universe) -> None:
    missing = sorted(t.name for t in program_signature(program).constants if t.name not in universe)
    if missing:
        raise UniverseError(f"universe lacks program constants {missing}")


def rule_instances(rule: Rule, universe: Universe) -> Iterable[tuple[dict, Rule]]:
    variables = sorted(rule.variables())
    terms = universe.terms()
    for combo in itertools.product(terms, repeat=len(variables)):
        sub = dict(zip(variables, combo))
        yield sub, rule.substitute(sub)


def ground(program: Program, universe: Universe | Iterable[str], max_rules: int | None = None) -> GroundProgram:
    """All instances of every rule; generalized literals keep their quantifiers."""
    universe = as_universe(universe)
    check_universe(program, universe)
    out = []
    for rule in program.rules:
        for _, inst in rule_instances(rule, universe):
            out.append(inst)
            if max_rules is not None and len(out) > max_rules:
                raise ResourceError(f"grounding exceeds {max_rules} rules")
    return GroundProgram(tuple(out), universe)


def herbrand_base(program: Program, universe: Universe | Iterable[str]) -> frozenset[Atom]:
    universe = as_universe(universe)
    terms = universe.terms()
    preds = program_signature(program).predicates
    return frozenset(
        Atom(pred, combo)
        for pred, arity in preds.items()
        for combo in itertools.product(terms, repeat=arity)
    )


def in_literals(variables: Sequence[Term], names: Iterable[str]) -> list:
    """``X != a`` for every variable and every name, as naf literals."""
    names = sorted(set(names))
    return [naf(eq_atom(v, Term(n, False))) for v in variables for n in names]


def in_set(variable: Term, program) -> list:
    """Literals keeping ``variable`` off ``#0`` and every predicate name of ``program``."""
    return in_literals([variable], {"#0", *program_signature(program).predicates})
