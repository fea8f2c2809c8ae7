"""Fixed-point completions of p-programs and p-gPs.

Four variants are built: the plain completion, the guarded one for fully
(loosely) guarded programs, and the two counterparts with generalized literals.
Rule atoms are named ``#<rule name>``, generalized-literal atoms ``#g1``,
``#g2``, ... in program order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import UnsupportedError
from ..guardedness import analyze_glit, analyze_rule
from ..model import (
    Atom,
    BAnd,
    BNot,
    BoolFormula,
    GeneralizedLiteral,
    Literal,
    OpenInterpretation,
    Program,
    Rule,
    Term,
    formula_vars,
    holds_formula,
    program_signature,
    substitute_formula,
)
from .evaluate import FiniteStructure
from .formula import (
    FALSE,
    TRUE,
    And,
    Eq,
    Exists,
    Fix,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PVar,
    Rel,
    conj,
    disj,
    exists,
    forall,
    render_all,
    substitute,
)

FIX_VAR = "W"


@dataclass
class Completion:
    formulas: list[Formula]
    pred: str
    arity: int
    rule_preds: dict[str, int] = field(default_factory=dict)
    glit_preds: dict[str, int] = field(default_factory=dict)

    def vocabulary(self) -> dict[str, int]:
        return {self.pred: self.arity, **self.rule_preds, **self.glit_preds}

    def render(self) -> str:
        return render_all(self.formulas)


def rule_pred(rule: Rule) -> str:
    return "#" + (rule.name or "r").lstrip("#")


def atom_formula(a: Atom, w_pred: str | None = None) -> Formula:
    if a.is_equality:
        return Eq(a.args[0], a.args[1])
    if w_pred is not None and a.pred == w_pred:
        return PVar(FIX_VAR, a.args)
    return Rel(a.pred, a.args)


def literal_formula(lit: Literal) -> Formula:
    f = atom_formula(lit.atom)
    return Not(f) if lit.negated else f


def bool_formula(f: BoolFormula) -> Formula:
    if isinstance(f, Atom):
        return atom_formula(f)
    if isinstance(f, BNot):
        return Not(bool_formula(f.arg))
    parts = tuple(bool_formula(a) for a in f.args)
    return And(parts) if isinstance(f, BAnd) else Or(parts)


def glit_formula(g: GeneralizedLiteral) -> Formula:
    return Forall(g.bound, Implies(bool_formula(g.antecedent), atom_formula(g.consequent)))


def sat_formula(rule: Rule) -> Formula:
    body = [literal_formula(l) for l in rule.body] + [glit_formula(g) for g in rule.glits]
    head = [literal_formula(l) for l in rule.head]
    return forall(sorted(rule.variables()), Implies(conj(body), disj(head)))


def _rule_args(rule: Rule) -> tuple[Term, ...]:
    return tuple(sorted(rule.variables()))


def glit_names(program: Program) -> list[tuple[Rule, GeneralizedLiteral, str]]:
    out = []
    for r in program.rules:
        for g in r.glits:
            out.append((r, g, f"#g{len(out) + 1}"))
    return out


def _glit_args(g: GeneralizedLiteral) -> tuple[Term, ...]:
    return tuple(sorted(formula_vars(g.antecedent)))


def _p_signature(program: Program, pred: str | None, arity: int | None) -> tuple[str, int]:
    preds = program_signature(program).predicates
    if len(preds) > 1:
        raise UnsupportedError(f"not a p-program: predicates {sorted(preds)}")
    if preds:
        (name, n), = preds.items()
        if pred is not None and pred != name:
            raise UnsupportedError(f"program predicate {name} differs from {pred}")
        return name, n
    if pred is None or arity is None:
        raise UnsupportedError("empty program: pass the predicate and its arity")
    return pred, arity


def _fresh_vars(program: Program, n: int, stem: str = "X") -> tuple[Term, ...]:
    taken = {v.name for v in program_signature(program).variables}
    while any(f"{stem}{i}" in taken for i in range(1, n + 1)):
        stem += "X"
    return tuple(Term(f"{stem}{i}", True) for i in range(1, n + 1))


def _distinct_constants(program: Program) -> list[Formula]:
    consts = sorted(program_signature(program).constants)
    return [Not(Eq(a, b)) for a, b in itertools.combinations(consts, 2)]


def _names(program: Program, with_glits: bool) -> None:
    if program.has_glits() and not with_glits:
        raise UnsupportedError("program has generalized literals; use the gP completion")
    rule_names = [r.name for r in program.rules]
    if len(set(rule_names)) != len(rule_names):
        raise UnsupportedError("rule names must be unique")


def _glit_body(program: Program, pred: str) -> dict[int, list[Formula]]:
    """Per rule index, the W-rewritten generalized literals ``forall Y (g(Z) -> psi)``."""
    out: dict[int, list[Formula]] = {}
    index = {id(r): i for i, r in enumerate(program.rules)}
    for rule, g, name in glit_names(program):
        form = Forall(g.bound, Implies(Rel(name, _glit_args(g)), atom_formula(g.consequent, pred)))
        out.setdefault(index[id(rule)], []).append(form)
    return out


def _fpf(program: Program, pred: str, arity: int, disjunct) -> Formula:
    xs = _fresh_vars(program, arity)
    glits = _glit_body(program, pred)
    parts = [PVar(FIX_VAR, xs)]
    for i, rule in enumerate(program.rules):
        head = rule.head_pos
        if head is None:
            continue
        parts.append(disjunct(rule, head, xs, glits.get(i, [])))
    body = Or(tuple(parts)) if len(parts) > 1 else Or((parts[0], FALSE))
    return Forall(xs, Implies(Rel(pred, xs), Fix("lfp", FIX_VAR, xs, body, xs)))


def _plain_disjunct(pred: str):
    def build(rule: Rule, head: Atom, xs, glit_forms) -> Formula:
        eqs = [Eq(x, t) for x, t in zip(xs, head.args)]
        body = [atom_formula(a, pred) for a in rule.body_pos]
        inner = conj(eqs + body + glit_forms + [Rel(rule_pred(rule), _rule_args(rule))])
        return exists(_rule_args(rule), inner)

    return build


def _guarded_disjunct(pred: str):
    def build(rule: Rule, head: Atom, xs, glit_forms) -> Formula:
        outside: list[Formula] = []
        sub: dict[Term, Term] = {}
        for x, t in zip(xs, head.args):
            if not t.is_var:
                outside.append(Eq(x, t))
            elif t in sub:
                outside.append(Eq(x, sub[t]))
            else:
                sub[t] = x
        remaining = [v for v in _rule_args(rule) if v not in sub]
        body = [atom_formula(a, pred) for a in rule.body_pos]
        inner = conj(body + glit_forms + [Rel(rule_pred(rule), _rule_args(rule))])
        return conj(outside + [exists(remaining, substitute(inner, sub))])

    return build


def _rule_preds(program: Program) -> dict[str, int]:
    return {rule_pred(r): len(r.variables()) for r in program.rules}


def _glit_preds(program: Program) -> dict[str, int]:
    return {name: len(_glit_args(g)) for _, g, name in glit_names(program)}


def _comp(program: Program, pred, arity, with_glits: bool) -> Completion:
    _names(program, with_glits)
    pred, arity = _p_signature(program, pred, arity)
    out = _distinct_constants(program)
    out.append(Exists(_fresh_vars(program, 1), TRUE))
    out += [sat_formula(r) for r in program.rules]
    for r in program.rules:
        cond = [atom_formula(a) for a in r.head_neg] + [Not(atom_formula(b)) for b in r.body_neg]
        out.append(forall(_rule_args(r), Iff(Rel(rule_pred(r), _rule_args(r)), conj(cond))))
    if with_glits:
        for _, g, name in glit_names(program):
            args = _glit_args(g)
            out.append(forall(args, Iff(Rel(name, args), bool_formula(g.antecedent))))
    out.append(_fpf(program, pred, arity, _plain_disjunct(pred)))
    return Completion(out, pred, arity, _rule_preds(program), _glit_preds(program) if with_glits else {})


def build_comp(program: Program, pred: str | None = None, arity: int | None = None) -> Completion:
    return _comp(program, pred, arity, with_glits=False)


def build_compg(program: Program, pred: str | None = None, arity: int | None = None) -> Completion:
    return _comp(program, pred, arity, with_glits=True)


def _formulas(atoms) -> list[Formula]:
    return [atom_formula(a) for a in atoms]


def _guarded_glit(g: GeneralizedLiteral) -> Formula:
    gg = analyze_glit(g)
    rest = conj(bool_formula(r) for r in gg.rest)
    consequent = atom_formula(g.consequent) if not gg.rest else Or((atom_formula(g.consequent), Not(rest)))
    return forall(gg.bound, Implies(atom_formula(gg.guard), consequent))


def _gcomp(program: Program, pred, arity, with_glits: bool) -> Completion:
    _names(program, with_glits)
    pred, arity = _p_signature(program, pred, arity)
    guards = {}
    for r in program.rules:
        info = analyze_rule(r)
        if r.is_free():
            guards[id(r)] = ((), info.head_guard)
        elif info.fully_guarded:
            guards[id(r)] = (info.body_guard, info.head_guard)
        elif info.fully_loosely_guarded and not with_glits:
            guards[id(r)] = (info.loose_body_guard, info.loose_head_guard)
        else:
            kind = "fully guarded" if with_glits else "fully (loosely) guarded"
            raise UnsupportedError(f"rule {r.name} is not {kind}")
    x = _fresh_vars(program, 1)[0]
    out = _distinct_constants(program)
    out.append(Exists((x,), Eq(x, x)))
    for r in program.rules:
        if r.is_free():
            continue
        body_guard, _ = guards[id(r)]
        rest = [a for a in r.body_pos if a not in body_guard]
        consequent = (
            [literal_formula(l) for l in r.head]
            + [Not(atom_formula(a)) for a in rest]
            + _formulas(r.body_neg)
            + [Not(_guarded_glit(g)) for g in r.glits]
        )
        out.append(forall(_rule_args(r), Implies(conj(_formulas(body_guard)), disj(consequent))))
    for r in program.rules:
        args = _rule_args(r)
        atom = Rel(rule_pred(r), args)
        cond = _formulas(r.head_neg) + [Not(atom_formula(b)) for b in r.body_neg]
        out.append(forall(args, Implies(atom, conj(cond))))
        _, head_guard = guards[id(r)]
        rest = [a for a in r.head_neg if a not in head_guard]
        consequent = [atom] + _formulas(r.body_neg) + [Not(atom_formula(a)) for a in rest]
        out.append(forall(args, Implies(conj(_formulas(head_guard)), disj(consequent))))
    if with_glits:
        for _, g, name in glit_names(program):
            gg = analyze_glit(g)
            args = _glit_args(g)
            atom = Rel(name, args)
            out.append(forall(args, Implies(atom, bool_formula(g.antecedent))))
            tail = [atom] + ([Not(conj(bool_formula(r) for r in gg.rest))] if gg.rest else [])
            out.append(forall(args, Implies(atom_formula(gg.guard), disj(tail))))
    out.append(_fpf(program, pred, arity, _guarded_disjunct(pred)))
    return Completion(out, pred, arity, _rule_preds(program), _glit_preds(program) if with_glits else {})


def build_gcomp(program: Program, pred: str | None = None, arity: int | None = None) -> Completion:
    return _gcomp(program, pred, arity, with_glits=False)


def build_gcompg(program: Program, pred: str | None = None, arity: int | None = None) -> Completion:
    return _gcomp(program, pred, arity, with_glits=True)


def completion_extension(program: Program, interp: OpenInterpretation, pred: str, arity: int) -> FiniteStructure:
    """The structure an open answer set should correspond to: itself plus rule and
    generalized-literal atoms, read off the answer-set side."""
    atoms = interp.atoms
    terms = interp.universe.terms()
    rels: dict[str, set] = {pred: {tuple(t.name for t in a.args) for a in atoms if a.pred == pred}}

    def holds(a: Atom, sub) -> bool:
        a = a.substitute(sub)
        if a.is_equality:
            return a.args[0].name == a.args[1].name
        return a in atoms

    for r in program.rules:
        args = _rule_args(r)
        found = rels.setdefault(rule_pred(r), set())
        for combo in itertools.product(terms, repeat=len(args)):
            sub = dict(zip(args, combo))
            if all(holds(a, sub) for a in r.head_neg) and not any(holds(b, sub) for b in r.body_neg):
                found.add(tuple(t.name for t in combo))
    for _, g, name in glit_names(program):
        args = _glit_args(g)
        found = rels.setdefault(name, set())
        for combo in itertools.product(terms, repeat=len(args)):
            sub = dict(zip(args, combo))
            if holds_formula(atoms, substitute_formula(g.antecedent, sub)):
                found.add(tuple(t.name for t in combo))
    return FiniteStructure(interp.universe.elements, {k: frozenset(v) for k, v in rels.items()})
