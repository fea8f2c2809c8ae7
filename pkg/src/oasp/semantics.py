"""Reference semantics: reducts, the immediate consequence operator, answer-set checks.

These functions favour clarity over speed.  The solver uses its own compiled
representation and calls back into this module to certify every result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .errors import UnsupportedError
from .grounder import GroundProgram, as_universe, ground
from .model import (
    Atom,
    OpenInterpretation,
    Program,
    Rule,
    holds_formula,
    pos,
    substitute_formula,
)


@dataclass(frozen=True)
class ReductRule:
    head: Atom | None
    body: frozenset[Atom]

    def __str__(self) -> str:
        body = ", ".join(str(a) for a in sorted(self.body))
        head = str(self.head) if self.head is not None else ""
        if not body:
            return f"{head}."
        return f"{head} :- {body}." if head else f":- {body}."


@dataclass(frozen=True)
class ReductProgram:
    rules: frozenset[ReductRule]

    @property
    def definite(self) -> list[ReductRule]:
        return [r for r in self.rules if r.head is not None]

    @property
    def constraints(self) -> list[ReductRule]:
        return [r for r in self.rules if r.head is None]

    def __len__(self) -> int:
        return len(self.rules)


def _equality_holds(atom: Atom) -> bool:
    return atom.args[0].name == atom.args[1].name


def _holds(atom: Atom, interp: frozenset[Atom]) -> bool:
    return _equality_holds(atom) if atom.is_equality else atom in interp


def _reduct_rule(head: Atom | None, body: Iterable[Atom]) -> ReductRule | None:
    """Evaluate equality atoms eagerly; ``None`` if some equality is false."""
    kept = []
    for atom in body:
        if atom.is_equality:
            if not _equality_holds(atom):
                return None
        else:
            kept.append(atom)
    return ReductRule(head, frozenset(kept))


def _atoms_of(interp) -> frozenset[Atom]:
    return interp.atoms if isinstance(interp, OpenInterpretation) else frozenset(interp)


def geli_reduct(program: GroundProgram, interp: OpenInterpretation) -> GroundProgram:
    """Replace each generalized literal by the consequents whose antecedent holds."""
    atoms = interp.atoms
    terms = program.universe.terms()
    out = []
    for rule in program.rules:
        if not rule.glits:
            out.append(rule)
            continue
        extra = []
        for g in rule.glits:
            for combo in itertools.product(terms, repeat=len(g.bound)):
                sub = dict(zip(g.bound, combo))
                if holds_formula(atoms, substitute_formula(g.antecedent, sub)):
                    extra.append(pos(g.consequent.substitute(sub)))
        out.append(Rule(rule.head, rule.body + tuple(extra), (), rule.name))
    return GroundProgram(tuple(out), program.universe)


def gl_reduct(program: GroundProgram, interp) -> ReductProgram:
    """Gelfond-Lifschitz reduct of a ground program without generalized literals."""
    atoms = _atoms_of(interp)
    out = set()
    for rule in program.rules:
        if rule.glits:
            raise UnsupportedError("apply the generalized-literal reduct first")
        if not all(_holds(a, atoms) for a in rule.head_neg):
            continue
        if any(_holds(a, atoms) for a in rule.body_neg):
            continue
        reduced = _reduct_rule(rule.head_pos, rule.body_pos)
        if reduced is not None:
            out.add(reduced)
    return ReductProgram(frozenset(out))


def gl_reduct_keeping_glits(program: GroundProgram, interp) -> GroundProgram:
    """GL reduct that treats generalized literals as positive body elements."""
    atoms = _atoms_of(interp)
    out = []
    for rule in program.rules:
        if not all(_holds(a, atoms) for a in rule.head_neg):
            continue
        if any(_holds(a, atoms) for a in rule.body_neg):
            continue
        if any(a.is_equality and not _equality_holds(a) for a in rule.body_pos):
            continue
        head = (pos(rule.head_pos),) if rule.head_pos is not None else ()
        body = tuple(pos(a) for a in rule.body_pos if not a.is_equality)
        out.append(Rule(head, body, rule.glits, rule.name))
    return GroundProgram(tuple(out), program.universe)


def t_step(reduct: ReductProgram, interp: frozenset[Atom]) -> frozenset[Atom]:
    return frozenset(r.head for r in reduct.definite if r.body <= interp)


def least_model(reduct: ReductProgram) -> frozenset[Atom]:
    return frozenset(derivation_depths(reduct))


def derivation_depths(reduct: ReductProgram) -> dict[Atom, int]:
    """Stage at which each atom first appears in the iteration of ``t_step``."""
    depths: dict[Atom, int] = {}
    current: frozenset[Atom] = frozenset()
    stage = 0
    while True:
        stage += 1
        nxt = t_step(reduct, current)
        new = nxt - current
        if not new:
            return depths
        for a in new:
            depths[a] = stage
        current = nxt


def iteration_trace(reduct: ReductProgram) -> list[frozenset[Atom]]:
    stages = [frozenset()]
    while True:
        nxt = t_step(reduct, stages[-1])
        if nxt == stages[-1]:
            return stages
        stages.append(nxt)


def is_answer_set(program: GroundProgram, interp) -> bool:
    atoms = _atoms_of(interp)
    reduct = gl_reduct(program, atoms)
    if least_model(reduct) != atoms:
        return False
    return not any(r.body <= atoms for r in reduct.constraints)


def is_open_answer_set(program: Program, interp: OpenInterpretation) -> bool:
    grounded = ground(program, interp.universe)
    return is_answer_set(geli_reduct(grounded, interp), interp.atoms)


def support_depths(program: Program, interp: OpenInterpretation) -> dict[Atom, int]:
    """Derivation depth of every atom of an open answer set."""
    grounded = geli_reduct(ground(program, interp.universe), interp)
    return derivation_depths(gl_reduct(grounded, interp.atoms))


def _as_reduct(program: GroundProgram) -> ReductProgram:
    out = set()
    for rule in program.rules:
        reduced = _reduct_rule(rule.head_pos, rule.body_pos)
        if reduced is not None:
            out.add(reduced)
    return ReductProgram(frozenset(out))


def reduct_commute_check(program: GroundProgram, interp: OpenInterpretation) -> bool:
    """Do the two reducts commute for this interpretation?"""
    first, second = commuted_reducts(program, interp)
    return first == second


def commuted_reducts(program: GroundProgram, interp: OpenInterpretation) -> tuple[ReductProgram, ReductProgram]:
    geli_first = gl_reduct(geli_reduct(program, interp), interp.atoms)
    gl_first = _as_reduct(geli_reduct(gl_reduct_keeping_glits(program, interp.atoms), interp))
    return geli_first, gl_first


def classical_universe(program: Program):
    from .model import program_signature

    return as_universe(sorted(t.name for t in program_signature(program).constants))
