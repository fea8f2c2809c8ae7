"""Program-to-program translations.

* ``hbg``: copy every positive body atom, negated, into the head
* ``to_p_program``: encode every predicate as a constant argument of one fresh predicate
* ``gua``: add binary guard atoms over every pair of variables
* ``free_choice``: add free rules for extensional predicates
* ``double_negation``: replace Datalog LITE generalized literals with auxiliary predicates
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnsupportedError
from .grounder import in_literals
from .model import (
    Atom,
    BAnd,
    BNot,
    GeneralizedLiteral,
    Literal,
    Program,
    Rule,
    Term,
    conj,
    eq_atom,
    map_formula_atoms,
    naf,
    pos,
    program_signature,
)

P_PRED = "#p"
ZERO = "#0"
GUA_PRED = "#g"


def hbg(program: Program) -> Program:
    rules = []
    for r in program.rules:
        extra = tuple(naf(a) for a in r.body_pos)
        rules.append(Rule(r.head + extra, r.body, r.glits, r.name))
    return Program(tuple(rules))


@dataclass(frozen=True)
class AtomMapping:
    """How original atoms sit inside the single predicate of a p-program."""

    pred: str
    arity: int
    zero: str
    original_arities: dict = field(hash=False)

    @property
    def special_constants(self) -> frozenset[str]:
        return frozenset(self.original_arities) | {self.zero}

    def encode(self, atom: Atom) -> Atom:
        if atom.is_equality:
            return atom
        pad = (Term(self.zero),) * (self.arity - atom.arity - 1)
        return Atom(self.pred, atom.args + pad + (Term(atom.pred),))

    def decode(self, atom: Atom) -> Atom | None:
        """The original atom, or ``None`` for atoms with no counterpart."""
        if atom.pred != self.pred:
            return None
        name = atom.args[-1].name
        if name not in self.original_arities:
            return None
        m = self.original_arities[name]
        body, pad = atom.args[:m], atom.args[m:-1]
        if any(t.name != self.zero for t in pad):
            return None
        if any(t.name in self.special_constants for t in body):
            return None
        return Atom(name, body)

    def query_atoms(self, pred: str, elements) -> list[Atom]:
        import itertools

        m = self.original_arities[pred]
        return [
            self.encode(Atom(pred, tuple(Term(e) for e in combo)))
            for combo in itertools.product(list(elements), repeat=m)
        ]

    def to_json(self) -> dict:
        return {
            "predicate": self.pred,
            "arity": self.arity,
            "zero": self.zero,
            "predicates": dict(sorted(self.original_arities.items())),
        }


def to_p_program(program: Program) -> tuple[Program, AtomMapping]:
    sig = program_signature(program)
    preds = dict(sig.predicates)
    arity = max(preds.values(), default=0) + 1
    mapping = AtomMapping(P_PRED, arity, ZERO, preds)
    specials = sorted(mapping.special_constants)

    def lit(l: Literal) -> Literal:
        return Literal(mapping.encode(l.atom), l.negated)

    rules = []
    for r in program.rules:
        head = tuple(lit(l) for l in r.head)
        body = tuple(lit(l) for l in r.body)
        glits = []
        for g in r.glits:
            ante = map_formula_atoms(g.antecedent, mapping.encode)
            guards = [BNot(eq_atom(y, Term(n))) for y in g.bound for n in specials]
            glits.append(GeneralizedLiteral(g.bound, conj([ante] + guards), mapping.encode(g.consequent)))
        if not r.is_free():
            body += tuple(in_literals(sorted(r.variables()), specials))
        rules.append(Rule(head, body, tuple(glits), r.name))
    return Program(tuple(rules)), mapping


def gua(program: Program) -> Program:
    sig = program_signature(program)
    rules = []
    for r in program.rules:
        vs = sorted(r.variables())
        guards = tuple(
            pos(Atom(GUA_PRED, (vs[i], vs[j]))) for i in range(len(vs)) for j in range(i, len(vs))
        )
        rules.append(Rule(r.head, r.body + guards, r.glits, r.name))
    consts = sorted(sig.constants)
    for a in consts:
        for b in consts:
            rules.append(Rule((pos(Atom(GUA_PRED, (a, b))),)))
    return Program(tuple(rules))


def guard_facts(program: Program) -> frozenset[Atom]:
    consts = sorted(program_signature(program).constants)
    return frozenset(Atom(GUA_PRED, (a, b)) for a in consts for b in consts)


def extensional_predicates(program: Program) -> dict[str, int]:
    sig = program_signature(program)
    heads = {r.head_pos.pred for r in program.rules if r.head_pos is not None}
    return {p: n for p, n in sorted(sig.predicates.items()) if p not in heads}


def free_choice(program: Program) -> Program:
    """P together with a free rule for every extensional predicate."""
    extra = []
    for p, n in extensional_predicates(program).items():
        atom = Atom(p, tuple(Term(f"X{i}", True) for i in range(1, n + 1)))
        extra.append(Rule((pos(atom), naf(atom)), name=f"#free_{p.lstrip('#')}"))
    return Program(program.rules + tuple(extra))


def double_negation(program: Program) -> Program:
    """``forall Y (a => b)`` becomes ``not aux(Xs)`` with ``aux(Xs) :- a, not b``."""
    from .datalog import check_lite_class

    cls = check_lite_class(program)
    if cls != "LITER":
        raise UnsupportedError(f"double negation needs a recursion-free guarded program, got {cls}")
    counter = 0
    rules = []
    for r in program.rules:
        replaced = []
        for g in r.glits:
            if not isinstance(g.antecedent, Atom):
                raise UnsupportedError("generalized literal antecedent must be a single atom")
            counter += 1
            args = tuple(sorted(g.free_variables()))
            aux = Atom(f"#dn{counter}", args)
            rules.append(
                Rule((pos(aux),), (pos(g.antecedent), naf(g.consequent)), name=f"#dn{counter}")
            )
            replaced.append(naf(aux))
        rules.append(Rule(r.head, r.body + tuple(replaced), (), r.name))
    return Program(tuple(rules))
