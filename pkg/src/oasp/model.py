"""Terms, atoms, literals, generalized literals, rules and programs.

Every object here is immutable and hashable.  Collections inside a rule are
kept in a canonical order (predicate name, then arguments) so two rules that
differ only in the order of their literals compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import ArityError, ProgramError, UniverseError

EQ = "="
SPECIAL_PREFIX = "#"

_BARE_CONST = re.compile(r"(?:[a-z][A-Za-z0-9_]*|[0-9]+|#[A-Za-z0-9_]+)\Z")
_BARE_PRED = re.compile(r"(?:[a-z][A-Za-z0-9_]*|#[A-Za-z0-9_]+)\Z")
_VAR_NAME = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"not", "v", "forall", "true", "false"})


def const_text(name: str) -> str:
    if _BARE_CONST.match(name) and name not in KEYWORDS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


@dataclass(frozen=True, order=True)
class Term:
    name: str
    is_var: bool = False

    @classmethod
    def var(cls, name: str) -> "Term":
        if not _VAR_NAME.match(name):
            raise ProgramError(f"invalid variable name {name!r}")
        return cls(name, True)

    @classmethod
    def const(cls, name: str) -> "Term":
        if not name:
            raise ProgramError("empty constant name")
        return cls(name, False)

    def __str__(self) -> str:
        return self.name if self.is_var else const_text(self.name)

    def __repr__(self) -> str:
        return f"{'Var' if self.is_var else 'Const'}({self.name!r})"


def var(name: str) -> Term:
    return Term.var(name)


def const(name: str) -> Term:
    return Term.const(name)


Substitution = dict  # Term -> Term


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if self.pred == EQ:
            if len(self.args) != 2:
                raise ProgramError("equality atoms take exactly two arguments")
        elif not _BARE_PRED.match(self.pred) or self.pred in KEYWORDS:
            raise ProgramError(f"invalid predicate name {self.pred!r}")

    @property
    def is_equality(self) -> bool:
        return self.pred == EQ

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)

    def variables(self) -> frozenset[Term]:
        return frozenset(t for t in self.args if t.is_var)

    def constants(self) -> frozenset[Term]:
        return frozenset(t for t in self.args if not t.is_var)

    def substitute(self, sub: dict) -> "Atom":
        if not sub:
            return self
        return Atom(self.pred, tuple(sub.get(t, t) for t in self.args))

    def key(self) -> tuple:
        return (self.pred, tuple((t.name, t.is_var) for t in self.args))

    def __lt__(self, other: "Atom") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        if self.is_equality:
            return f"{self.args[0]} = {self.args[1]}"
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(t) for t in self.args)})"

    def __repr__(self) -> str:
        return f"Atom({str(self)!r})"


def eq_atom(left: Term, right: Term) -> Atom:
    return Atom(EQ, (left, right))


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def variables(self) -> frozenset[Term]:
        return self.atom.variables()

    def substitute(self, sub: dict) -> "Literal":
        return Literal(self.atom.substitute(sub), self.negated)

    def key(self) -> tuple:
        return (self.atom.key(), self.negated)

    def __lt__(self, other: "Literal") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        if not self.negated:
            return str(self.atom)
        if self.atom.is_equality:
            return f"{self.atom.args[0]} != {self.atom.args[1]}"
        return f"not {self.atom}"


def pos(atom: Atom) -> Literal:
    return Literal(atom, False)


def naf(atom: Atom) -> Literal:
    return Literal(atom, True)


def positive_part(lits: Iterable[Literal]) -> frozenset[Atom]:
    """Atoms of the non-negated literals; ``X != Y`` counts as negated equality."""
    return frozenset(l.atom for l in lits if not l.negated)


def negative_part(lits: Iterable[Literal]) -> frozenset[Atom]:
    return frozenset(l.atom for l in lits if l.negated)


# Boolean formulas over atoms, used as antecedents of generalized literals.


@dataclass(frozen=True)
class BNot:
    arg: "BoolFormula"


@dataclass(frozen=True)
class BAnd:
    args: tuple["BoolFormula", ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ProgramError("a conjunction needs at least two operands")


@dataclass(frozen=True)
class BOr:
    args: tuple["BoolFormula", ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ProgramError("a disjunction needs at least two operands")


BoolFormula = Union[Atom, BNot, BAnd, BOr]


def conj(items: Iterable[BoolFormula]) -> BoolFormula:
    items = tuple(items)
    if not items:
        raise ProgramError("empty conjunction")
    return items[0] if len(items) == 1 else BAnd(items)


def formula_atoms(f: BoolFormula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, BNot):
        yield from formula_atoms(f.arg)
    else:
        for a in f.args:
            yield from formula_atoms(a)


def formula_vars(f: BoolFormula) -> frozenset[Term]:
    return frozenset(t for a in formula_atoms(f) for t in a.args if t.is_var)


def substitute_formula(f: BoolFormula, sub: dict) -> BoolFormula:
    if not sub:
        return f
    if isinstance(f, Atom):
        return f.substitute(sub)
    if isinstance(f, BNot):
        return BNot(substitute_formula(f.arg, sub))
    return type(f)(tuple(substitute_formula(a, sub) for a in f.args))


def map_formula_atoms(f: BoolFormula, fn) -> BoolFormula:
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, BNot):
        return BNot(map_formula_atoms(f.arg, fn))
    return type(f)(tuple(map_formula_atoms(a, fn) for a in f.args))


def formula_text(f: BoolFormula, parent: int = 0) -> str:
    # precedence: or 1, and 2, not 3
    if isinstance(f, Atom):
        return str(f)
    if isinstance(f, BNot):
        if isinstance(f.arg, Atom) and f.arg.is_equality:
            return f"{f.arg.args[0]} != {f.arg.args[1]}"
        inner = formula_text(f.arg, 3)
        return f"~{inner}"
    level = 2 if isinstance(f, BAnd) else 1
    sep = " & " if level == 2 else " | "
    text = sep.join(formula_text(a, level + 1 if isinstance(a, type(f)) else level) for a in f.args)
    return f"({text})" if parent >= level else text


@dataclass(frozen=True)
class GeneralizedLiteral:
    """``forall bound (antecedent => consequent)``."""

    bound: tuple[Term, ...]
    antecedent: BoolFormula
    consequent: Atom

    def __post_init__(self) -> None:
        if not isinstance(self.bound, tuple):
            object.__setattr__(self, "bound", tuple(self.bound))
        if not all(t.is_var for t in self.bound):
            raise ProgramError("only variables can be quantified")
        if len(set(self.bound)) != len(self.bound):
            raise ProgramError("repeated quantified variable")

    def free_variables(self) -> frozenset[Term]:
        inner = formula_vars(self.antecedent) | self.consequent.variables()
        return inner - frozenset(self.bound)

    def all_variables(self) -> frozenset[Term]:
        return formula_vars(self.antecedent) | self.consequent.variables() | frozenset(self.bound)

    def atoms(self) -> Iterator[Atom]:
        yield from formula_atoms(self.antecedent)
        yield self.consequent

    def substitute(self, sub: dict) -> "GeneralizedLiteral":
        """Replace free occurrences only; quantified variables shadow."""
        sub = {k: v for k, v in sub.items() if k not in self.bound}
        if not sub:
            return self
        return GeneralizedLiteral(
            self.bound, substitute_formula(self.antecedent, sub), self.consequent.substitute(sub)
        )

    def is_ground(self) -> bool:
        return not self.free_variables()

    def __str__(self) -> str:
        names = ",".join(t.name for t in self.bound)
        return f"forall {names} ({formula_text(self.antecedent)} => {self.consequent})"


def _canonical(items: Iterable, kind: type) -> tuple:
    unique = set(items)
    for item in unique:
        if not isinstance(item, kind):
            raise ProgramError(f"expected {kind.__name__}, got {type(item).__name__}")
    return tuple(sorted(unique, key=lambda x: x.key() if hasattr(x, "key") else str(x)))


@dataclass(frozen=True)
class Rule:
    head: tuple[Literal, ...] = ()
    body: tuple[Literal, ...] = ()
    glits: tuple[GeneralizedLiteral, ...] = ()
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "head", _canonical(self.head, Literal))
        object.__setattr__(self, "body", _canonical(self.body, Literal))
        object.__setattr__(self, "glits", _canonical(self.glits, GeneralizedLiteral))
        positive = [lit for lit in self.head if not lit.negated]
        if len(positive) > 1:
            raise ProgramError("a rule head holds at most one positive atom")
        if positive and positive[0].atom.is_equality:
            raise ProgramError("equality cannot occur positively in a rule head")

    @property
    def head_pos(self) -> Atom | None:
        for lit in self.head:
            if not lit.negated:
                return lit.atom
        return None

    @property
    def head_neg(self) -> tuple[Atom, ...]:
        return tuple(lit.atom for lit in self.head if lit.negated)

    @property
    def body_pos(self) -> tuple[Atom, ...]:
        return tuple(lit.atom for lit in self.body if not lit.negated)

    @property
    def body_neg(self) -> tuple[Atom, ...]:
        return tuple(lit.atom for lit in self.body if lit.negated)

    def is_constraint(self) -> bool:
        return not self.head

    def is_free(self) -> bool:
        """``q(t) v not q(t).`` with nothing else."""
        if self.body or self.glits or len(self.head) != 2:
            return False
        a, b = self.head
        return a.atom == b.atom and a.negated != b.negated and not a.atom.is_equality

    def variables(self) -> frozenset[Term]:
        found: set[Term] = set()
        for lit in self.head + self.body:
            found |= lit.variables()
        for g in self.glits:
            found |= g.free_variables()
        return frozenset(found)

    def atoms(self) -> Iterator[Atom]:
        for lit in self.head + self.body:
            yield lit.atom
        for g in self.glits:
            yield from g.atoms()

    def constants(self) -> frozenset[Term]:
        return frozenset(t for a in self.atoms() for t in a.args if not t.is_var)

    def is_ground(self) -> bool:
        return not self.variables()

    def substitute(self, sub: dict) -> "Rule":
        return Rule(
            tuple(lit.substitute(sub) for lit in self.head),
            tuple(lit.substitute(sub) for lit in self.body),
            tuple(g.substitute(sub) for g in self.glits),
            self.name,
        )

    def renamed(self, name: str | None) -> "Rule":
        return Rule(self.head, self.body, self.glits, name)

    def structure(self) -> tuple:
        return (self.head, self.body, self.glits)

    def __str__(self) -> str:
        from .parser import render_rule

        return render_rule(self)


def is_free_rule(rule: Rule) -> bool:
    return rule.is_free()


@dataclass(frozen=True)
class Signature:
    constants: frozenset[Term]
    variables: frozenset[Term]
    predicates: dict  # name -> arity (equality excluded)

    def __hash__(self) -> int:
        return hash((self.constants, self.variables, tuple(sorted(self.predicates.items()))))


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        rules = tuple(self.rules)
        used = {r.name for r in rules if r.name is not None}
        named = []
        for i, r in enumerate(rules, start=1):
            if r.name is None:
                candidate = f"r{i}"
                while candidate in used:
                    candidate += "_"
                used.add(candidate)
                r = r.renamed(candidate)
            named.append(r)
        object.__setattr__(self, "rules", tuple(named))
        program_signature(self)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules)

    def rule_set(self) -> frozenset:
        return frozenset(r.structure() for r in self.rules)

    def has_glits(self) -> bool:
        return any(r.glits for r in self.rules)

    def __str__(self) -> str:
        from .parser import render_program

        return render_program(self)


def program_signature(program: Program | Iterable[Rule]) -> Signature:
    rules = program.rules if isinstance(program, Program) else tuple(program)
    consts: set[Term] = set()
    variables: set[Term] = set()
    preds: dict[str, int] = {}
    for r in rules:
        variables |= r.variables()
        for g in r.glits:
            variables |= frozenset(g.bound)
        for a in r.atoms():
            consts |= a.constants()
            if a.is_equality:
                continue
            seen = preds.setdefault(a.pred, a.arity)
            if seen != a.arity:
                raise ArityError(f"predicate {a.pred} used with arities {seen} and {a.arity}")
    clash = {t.name for t in consts} & set(preds)
    if clash:
        raise ProgramError(f"names used both as predicate and constant: {sorted(clash)}")
    return Signature(frozenset(consts), frozenset(variables), preds)


@dataclass(frozen=True)
class Universe:
    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        elems = tuple(dict.fromkeys(self.elements))
        if not elems:
            raise UniverseError("a universe must be non-empty")
        object.__setattr__(self, "elements", elems)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, name: object) -> bool:
        return name in self.elements

    def terms(self) -> tuple[Term, ...]:
        return tuple(Term(e, False) for e in self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(const_text(e) for e in self.elements) + "}"


def fresh_elements(count: int, taken: Iterable[str] = ()) -> list[str]:
    """Names u1, u2, ... skipping anything in ``taken``."""
    taken = set(taken)
    out, i = [], 1
    while len(out) < count:
        name = f"u{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return out


def program_universe(program: Program, extra: int = 0) -> Universe:
    """Constants of the program plus ``extra`` fresh elements."""
    names = sorted(t.name for t in program_signature(program).constants)
    sig = program_signature(program)
    names += fresh_elements(extra, set(names) | set(sig.predicates))
    return Universe(tuple(names))


@dataclass(frozen=True)
class OpenInterpretation:
    universe: Universe
    atoms: frozenset[Atom]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", frozenset(self.atoms))

    def __str__(self) -> str:
        body = ", ".join(str(a) for a in sorted(self.atoms))
        return f"({self.universe}, {{{body}}})"


def _holds_atom(atoms: frozenset[Atom], a: Atom) -> bool:
    if a.is_equality:
        left, right = a.args
        return left.name == right.name
    return a in atoms


def holds_formula(atoms: frozenset[Atom], f: BoolFormula) -> bool:
    if isinstance(f, Atom):
        return _holds_atom(atoms, f)
    if isinstance(f, BNot):
        return not holds_formula(atoms, f.arg)
    if isinstance(f, BAnd):
        return all(holds_formula(atoms, a) for a in f.args)
    return any(holds_formula(atoms, a) for a in f.args)


def _require_ground(obj) -> None:
    from .errors import UnboundVariableError

    free = obj.variables() if hasattr(obj, "variables") else formula_vars(obj)
    if free:
        raise UnboundVariableError(f"{obj} is not ground")


def satisfies(interp: OpenInterpretation, item) -> bool:
    """Truth of a ground literal, formula, generalized literal or rule."""
    import itertools

    atoms = interp.atoms
    if isinstance(item, Literal):
        _require_ground(item)
        return _holds_atom(atoms, item.atom) != item.negated
    if isinstance(item, (Atom, BNot, BAnd, BOr)):
        _require_ground(item)
        return holds_formula(atoms, item)
    if isinstance(item, GeneralizedLiteral):
        if item.free_variables():
            from .errors import UnboundVariableError

            raise UnboundVariableError(f"{item} is not ground")
        terms = interp.universe.terms()
        for combo in itertools.product(terms, repeat=len(item.bound)):
            sub = dict(zip(item.bound, combo))
            if holds_formula(atoms, substitute_formula(item.antecedent, sub)):
                if not _holds_atom(atoms, item.consequent.substitute(sub)):
                    return False
        return True
    if isinstance(item, Rule):
        _require_ground(item)
        body = all(satisfies(interp, lit) for lit in item.body) and all(
            satisfies(interp, g) for g in item.glits
        )
        return not body or any(satisfies(interp, lit) for lit in item.head)
    raise TypeError(f"cannot evaluate {type(item).__name__}")
