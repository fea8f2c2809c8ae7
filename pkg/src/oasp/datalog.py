"""Stratified Datalog with generalized literals, evaluated stratum by stratum."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import NotStratifiedError, ProgramError, UnsupportedError
from .grounder import ground
from .guardedness import analyze_glit
from .model import (
    Atom,
    OpenInterpretation,
    Program,
    Rule,
    Universe,
    formula_atoms,
    program_signature,
)
from .semantics import geli_reduct, least_model, _reduct_rule, ReductProgram


@dataclass(frozen=True)
class StratifiedDatalogProgram:
    program: Program
    strata: tuple[tuple[Rule, ...], ...]
    levels: dict[str, int]

    def head_predicates(self, index: int) -> set[str]:
        return {r.head_pos.pred for r in self.strata[index]}

    def edb(self, index: int) -> set[str]:
        """Predicates a stratum reads without defining them."""
        heads = self.head_predicates(index)
        used = set()
        for r in self.strata[index]:
            used.update(a.pred for a in r.atoms() if not a.is_equality)
        return used - heads

    def __len__(self) -> int:
        return len(self.strata)


@dataclass
class InputStructure:
    """Relations over a domain; equality is always the identity and never stored."""

    domain: tuple[str, ...]
    facts: frozenset[Atom] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        self.domain = tuple(dict.fromkeys(self.domain))
        self.facts = frozenset(self.facts)
        arities: dict[str, int] = {}
        for a in self.facts:
            if a.is_equality:
                raise ProgramError("equality is fixed to the identity in input structures")
            if not a.is_ground():
                raise ProgramError(f"input fact {a} is not ground")
            if arities.setdefault(a.pred, a.arity) != a.arity:
                raise ProgramError(f"predicate {a.pred} used with arities {arities[a.pred]} and {a.arity}")

    def relation(self, pred: str) -> set[tuple[str, ...]]:
        return {tuple(t.name for t in a.args) for a in self.facts if a.pred == pred}

    def active_domain(self) -> set[str]:
        return {t.name for a in self.facts for t in a.args}


def identity_input(domain: Iterable[str]) -> InputStructure:
    return InputStructure(tuple(domain))


def _check_datalog(program: Program) -> None:
    for r in program.rules:
        if r.head_pos is None or r.head_neg or len(r.head) != 1:
            raise UnsupportedError(f"rule {r.name} is not a Datalog rule (single positive head atom required)")


def _dependencies(program: Program) -> list[tuple[str, str, bool]]:
    """Edges (head, body predicate, strict) of the predicate dependency graph."""
    edges = []
    for r in program.rules:
        h = r.head_pos.pred
        for a in r.body_pos:
            if not a.is_equality:
                edges.append((h, a.pred, False))
        for a in r.body_neg:
            if not a.is_equality:
                edges.append((h, a.pred, True))
        for g in r.glits:
            for a in formula_atoms(g.antecedent):
                if not a.is_equality:
                    edges.append((h, a.pred, True))
            if not g.consequent.is_equality:
                edges.append((h, g.consequent.pred, False))
    return edges


def stratify(program: Program) -> StratifiedDatalogProgram:
    """Lowest-level stratification; naf and antecedent predicates must sit strictly lower."""
    _check_datalog(program)
    heads = sorted({r.head_pos.pred for r in program.rules})
    edges = [(h, b, s) for h, b, s in _dependencies(program) if b in heads]
    level = {h: 0 for h in heads}
    for _ in range(len(heads) + 1):
        changed = False
        for h, b, strict in edges:
            need = level[b] + (1 if strict else 0)
            if level[h] < need:
                level[h] = need
                changed = True
        if not changed:
            break
    else:
        raise NotStratifiedError("program is not stratified: a predicate depends negatively on itself")
    if any(level[h] >= len(heads) for h in heads):
        raise NotStratifiedError("program is not stratified: a predicate depends negatively on itself")
    used = sorted(set(level.values()))
    renumber = {v: i for i, v in enumerate(used)}
    levels = {h: renumber[v] for h, v in level.items()}
    strata = tuple(
        tuple(r for r in program.rules if levels[r.head_pos.pred] == i) for i in range(len(used))
    )
    return StratifiedDatalogProgram(program, strata, levels)


def _as_stratified(program) -> StratifiedDatalogProgram:
    return program if isinstance(program, StratifiedDatalogProgram) else stratify(program)


def evaluation_domain(program: Program, structure: InputStructure) -> tuple[str, ...]:
    consts = sorted(t.name for t in program_signature(program).constants)
    return tuple(dict.fromkeys((*structure.domain, *sorted(structure.active_domain()), *consts)))


def lfp_model(program, structure: InputStructure, trace: list | None = None) -> InputStructure:
    """Stratum-wise least fixed point over the input.

    Lower strata are final before a stratum starts, so negation and
    generalized-literal antecedents are read off the current structure and
    the stratum reduces to a definite program.
    """
    strat = _as_stratified(program)
    domain = evaluation_domain(strat.program, structure)
    universe = Universe(domain)
    current = frozenset(structure.facts)
    for index, rules in enumerate(strat.strata):
        grounded = ground(Program(rules), universe)
        interp = OpenInterpretation(universe, current)
        expanded = geli_reduct(grounded, interp)
        reduct = set()
        for r in expanded.rules:
            if any(a in current or (a.is_equality and a.args[0] == a.args[1]) for a in r.body_neg):
                continue
            rr = _reduct_rule(r.head_pos, r.body_pos)
            if rr is not None:
                reduct.add(rr)
        for a in current:
            reduct.add(_reduct_rule(a, ()))
        previous = current
        current = least_model(ReductProgram(frozenset(reduct)))
        assert previous <= current, "strata must grow monotonically"
        if trace is not None:
            trace.append((index, current - previous))
    return InputStructure(domain, current)


def eval_query(program, pred: str, structure: InputStructure) -> set[tuple[str, ...]]:
    strat = _as_stratified(program)
    if pred not in program_signature(strat.program).predicates:
        raise ProgramError(f"unknown predicate {pred}")
    return lfp_model(strat, structure).relation(pred)


def _recursion_free(strat: StratifiedDatalogProgram) -> bool:
    """Some stratification puts every used head predicate strictly below its user,
    which holds exactly when the dependency graph on head predicates is acyclic."""
    heads = set(strat.levels)
    graph: dict[str, set[str]] = {h: set() for h in heads}
    for h, b, _ in _dependencies(strat.program):
        if b in heads:
            graph[h].add(b)
    state: dict[str, int] = {}

    def cyclic(node: str) -> bool:
        state[node] = 1
        for nxt in graph[node]:
            mark = state.get(nxt)
            if mark == 1 or (mark is None and cyclic(nxt)):
                return True
        state[node] = 2
        return False

    return not any(state.get(h) is None and cyclic(h) for h in sorted(heads))


def _rule_guarded(rule: Rule) -> bool:
    vs = rule.variables()
    if vs and not any(vs <= a.variables() for a in rule.body_pos if not a.is_equality):
        return False
    return all(analyze_glit(g) is not None and _glit_single_atom(g) for g in rule.glits)


def _glit_single_atom(g) -> bool:
    return isinstance(g.antecedent, Atom) and g.all_variables() <= g.antecedent.variables()


def _rule_monadic(rule: Rule) -> bool:
    return rule.head_pos.arity <= 1 and len(rule.variables()) <= 1 and all(
        _glit_single_atom(g) for g in rule.glits
    )


def check_lite_class(program: Program) -> str | None:
    """``LITER`` (recursion-free, all guarded), ``LITEM`` (all guarded), ``LITE`` or None."""
    try:
        strat = stratify(program)
    except (NotStratifiedError, UnsupportedError):
        return None
    guarded = [_rule_guarded(r) for r in program.rules]
    if all(guarded):
        return "LITER" if _recursion_free(strat) else "LITEM"
    if all(g or _rule_monadic(r) for g, r in zip(guarded, program.rules)):
        return "LITE"
    return None


def input_structures(domain: Iterable[str], arities: dict[str, int]) -> Iterable[InputStructure]:
    """Every input over the domain for the given extensional predicates."""
    domain = tuple(domain)
    from .model import Term

    cells = [
        Atom(p, tuple(Term(c) for c in combo))
        for p in sorted(arities)
        for combo in itertools.product(domain, repeat=arities[p])
    ]
    for mask in range(1 << len(cells)):
        yield InputStructure(domain, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))


def query_satisfiable(program, pred: str, domain: Iterable[str], limit: int = 1 << 16) -> InputStructure | None:
    """An input over exactly ``domain`` whose least model has a ``pred`` tuple."""
    strat = _as_stratified(program)
    from .transforms import extensional_predicates

    edb = extensional_predicates(strat.program)
    domain = tuple(domain)
    cells = sum(len(domain) ** n for n in edb.values())
    if 1 << cells > limit:
        raise UnsupportedError(f"{1 << cells} input structures exceed the limit")
    for structure in input_structures(domain, edb):
        if lfp_model(strat, structure).relation(pred):
            return structure
    return None
