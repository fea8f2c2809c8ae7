"""Guards for rules, generalized literals and programs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .model import (
    Atom,
    BAnd,
    BoolFormula,
    GeneralizedLiteral,
    Program,
    Rule,
    Term,
    eq_atom,
    formula_text,
    formula_vars,
    program_signature,
)

CLASS_ORDER = ("FGP", "GP", "FLGP", "LGP", "FGgP", "GgP")


@dataclass(frozen=True)
class GlitGuard:
    """``forall bound (guard & rest => consequent)`` with the guard split off."""

    bound: tuple[Term, ...]
    guard: Atom
    rest: tuple[BoolFormula, ...]
    consequent: Atom


def _conjuncts(f: BoolFormula) -> list[BoolFormula]:
    if isinstance(f, BAnd):
        out = []
        for g in f.args:
            out.extend(_conjuncts(g))
        return out
    return [f]


def analyze_glit(g: GeneralizedLiteral) -> GlitGuard | None:
    """Split off a guard atom, dropping quantified variables that occur nowhere."""
    mentioned = formula_vars(g.antecedent) | g.consequent.variables()
    bound = tuple(y for y in g.bound if y in mentioned)
    parts = _conjuncts(g.antecedent)
    candidates = sorted((p for p in parts if isinstance(p, Atom)), key=Atom.key)
    for cand in candidates:
        rest = list(parts)
        rest.remove(cand)
        needed = set(bound) | g.consequent.variables()
        for r in rest:
            needed |= formula_vars(r)
        if needed <= cand.variables():
            return GlitGuard(bound, cand, tuple(rest), g.consequent)
    return None


def _single_guard(atoms: Sequence[Atom], variables: frozenset[Term]) -> tuple[Atom, ...] | None:
    for a in sorted(set(atoms), key=Atom.key):
        if variables <= a.variables():
            return (a,)
    return None


def _loose_guard(atoms: Sequence[Atom], variables: frozenset[Term]) -> tuple[Atom, ...] | None:
    pool = sorted(set(a for a in atoms if a.variables()), key=Atom.key)
    vs = sorted(variables)
    pairs = [(x, y) for i, x in enumerate(vs) for y in vs[i:]]
    for size in range(1, len(pool) + 1):
        for subset in itertools.combinations(pool, size):
            if all(any({x, y} <= a.variables() for a in subset) for x, y in pairs):
                return subset
    return None


@dataclass
class RuleGuards:
    name: str
    free: bool
    variables: tuple[str, ...]
    guarded: bool
    loosely_guarded: bool
    fully_guarded: bool
    fully_loosely_guarded: bool
    body_guard: tuple[Atom, ...] | None
    loose_body_guard: tuple[Atom, ...] | None
    head_guard: tuple[Atom, ...] | None
    loose_head_guard: tuple[Atom, ...] | None
    implicit: bool
    glit_guards: list = field(default_factory=list)
    implicit_head: bool = False

    @property
    def strictly_fully_guarded(self) -> bool:
        """Fully guarded without relying on an implicit ``X = X`` head guard."""
        return self.fully_guarded and not self.implicit_head

    def to_json(self) -> dict:
        def txt(guard):
            return None if guard is None else [str(a) for a in guard]

        return {
            "name": self.name,
            "free": self.free,
            "variables": list(self.variables),
            "guarded": self.guarded,
            "loosely_guarded": self.loosely_guarded,
            "fully_guarded": self.fully_guarded,
            "fully_loosely_guarded": self.fully_loosely_guarded,
            "body_guard": txt(self.body_guard),
            "loose_body_guard": txt(self.loose_body_guard),
            "head_guard": txt(self.head_guard),
            "loose_head_guard": txt(self.loose_head_guard),
            "implicit_guard": self.implicit,
            "strictly_fully_guarded": self.strictly_fully_guarded,
            "generalized_literals": [
                {"literal": text, "guard": None if gg is None else str(gg.guard)} for text, gg in self.glit_guards
            ],
        }


def _guards(atoms: Sequence[Atom], variables: frozenset[Term], finder) -> tuple[tuple[Atom, ...] | None, bool]:
    if not variables:
        return (), False
    found = finder(atoms, variables)
    if found is not None:
        return found, False
    if len(variables) == 1:
        (x,) = variables
        return (eq_atom(x, x),), True
    return None, False


def analyze_rule(rule: Rule) -> RuleGuards:
    variables = rule.variables()
    body_guard, implicit_b = _guards(rule.body_pos, variables, _single_guard)
    loose_body, implicit_lb = _guards(rule.body_pos, variables, _loose_guard)
    head_guard, implicit_h = _guards(rule.head_neg, variables, _single_guard)
    loose_head, implicit_lh = _guards(rule.head_neg, variables, _loose_guard)
    glit_guards = [(str(g), analyze_glit(g)) for g in rule.glits]
    glits_ok = all(gg is not None for _, gg in glit_guards)
    guarded = body_guard is not None and glits_ok
    loose = loose_body is not None and glits_ok
    return RuleGuards(
        name=rule.name or "",
        free=rule.is_free(),
        variables=tuple(v.name for v in sorted(variables)),
        guarded=guarded,
        loosely_guarded=loose,
        fully_guarded=guarded and head_guard is not None,
        fully_loosely_guarded=loose and loose_head is not None,
        body_guard=body_guard,
        loose_body_guard=loose_body,
        head_guard=head_guard,
        loose_head_guard=loose_head,
        implicit=implicit_b or implicit_lb or implicit_h or implicit_lh,
        glit_guards=glit_guards,
        implicit_head=implicit_h,
    )


@dataclass
class GuardReport:
    rules: list[RuleGuards]
    classes: list[str]
    program_class: str | None
    bound: bool
    width: int
    max_arity: int

    def to_json(self) -> dict:
        return {
            "program_class": self.program_class,
            "classes": self.classes,
            "bound": self.bound,
            "width": self.width,
            "max_arity": self.max_arity,
            "rules": [r.to_json() for r in self.rules],
        }


def sat_width(program: Program) -> int:
    from .fpl.completion import sat_formula
    from .fpl.formula import width

    return max((width(sat_formula(r)) for r in program.rules), default=0)


def analyze_program(program: Program, max_width: int = 3, max_arity: int = 3) -> GuardReport:
    reports = [analyze_rule(r) for r in program.rules]
    checked = [g for g in reports if not g.free]
    classes = []
    if not program.has_glits():
        if all(g.fully_guarded for g in checked):
            classes.append("FGP")
        if all(g.guarded for g in checked):
            classes.append("GP")
        if all(g.fully_loosely_guarded for g in checked):
            classes.append("FLGP")
        if all(g.loosely_guarded for g in checked):
            classes.append("LGP")
    if all(g.fully_guarded for g in checked):
        classes.append("FGgP")
    if all(g.guarded for g in checked):
        classes.append("GgP")
    classes = [c for c in CLASS_ORDER if c in classes]
    width = sat_width(program)
    arity = max(program_signature(program).predicates.values(), default=0)
    return GuardReport(
        rules=reports,
        classes=classes,
        program_class=classes[0] if classes else None,
        bound=width <= max_width and arity <= max_arity,
        width=width,
        max_arity=arity,
    )
