"""First-order formulas with least and greatest fixed points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from ..errors import ProgramError
from ..model import Term


@dataclass(frozen=True)
class Rel:
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class PVar:
    """Application of a fixed-point predicate variable."""

    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    variables: tuple[Term, ...]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    variables: tuple[Term, ...]
    body: "Formula"


@dataclass(frozen=True)
class Fix:
    kind: str  # "lfp" or "gfp"
    pvar: str
    params: tuple[Term, ...]
    body: "Formula"
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("lfp", "gfp"):
            raise ProgramError(f"unknown fixed point kind {self.kind!r}")
        if len(self.params) != len(self.args):
            raise ProgramError(f"{self.pvar} has {len(self.params)} parameters but {len(self.args)} arguments")
        if not is_positive_in(self.body, self.pvar):
            raise ProgramError(f"{self.pvar} occurs negatively in its fixed point body")
        loose = free_vars(self.body) - frozenset(self.params)
        if loose:
            names = ", ".join(sorted(v.name for v in loose))
            raise ProgramError(f"fixed point body has free variables {names} outside its parameters")


Formula = Union[Rel, Eq, PVar, Const, Not, And, Or, Implies, Iff, Forall, Exists, Fix]
ATOMIC = (Rel, Eq, PVar, Const)


def conj(items: Iterable[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        return TRUE
    return items[0] if len(items) == 1 else And(items)


def disj(items: Iterable[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        return FALSE
    return items[0] if len(items) == 1 else Or(items)


def forall(variables: Iterable[Term], body: Formula) -> Formula:
    variables = tuple(variables)
    return Forall(variables, body) if variables else body


def exists(variables: Iterable[Term], body: Formula) -> Formula:
    variables = tuple(variables)
    return Exists(variables, body) if variables else body


def children(f: Formula) -> tuple:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists, Fix)):
        return (f.body,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from walk(c)


def _term_vars(terms) -> frozenset[Term]:
    return frozenset(t for t in terms if t.is_var)


def free_vars(f: Formula) -> frozenset[Term]:
    if isinstance(f, (Rel, PVar)):
        return _term_vars(f.args)
    if isinstance(f, Eq):
        return _term_vars((f.left, f.right))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - frozenset(f.variables)
    if isinstance(f, Fix):
        return (free_vars(f.body) - frozenset(f.params)) | _term_vars(f.args)
    out: frozenset[Term] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def free_pvars(f: Formula) -> frozenset[str]:
    if isinstance(f, PVar):
        return frozenset({f.name})
    if isinstance(f, Fix):
        return free_pvars(f.body) - {f.pvar}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_pvars(c)
    return out


def relations(f: Formula) -> dict[str, int]:
    return {g.pred: len(g.args) for g in walk(f) if isinstance(g, Rel)}


def constants(f: Formula) -> set[str]:
    out = set()
    for g in walk(f):
        terms = ()
        if isinstance(g, (Rel, PVar)):
            terms = g.args
        elif isinstance(g, Eq):
            terms = (g.left, g.right)
        elif isinstance(g, Fix):
            terms = g.args
        out |= {t.name for t in terms if not t.is_var}
    return out


def substitute(f: Formula, sub: dict) -> Formula:
    """Replace free variables; quantified ones shadow the mapping."""
    if not sub:
        return f

    def t(x: Term) -> Term:
        return sub.get(x, x)

    if isinstance(f, Rel):
        return Rel(f.pred, tuple(map(t, f.args)))
    if isinstance(f, PVar):
        return PVar(f.name, tuple(map(t, f.args)))
    if isinstance(f, Eq):
        return Eq(t(f.left), t(f.right))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, sub))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute(c, sub) for c in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(substitute(f.left, sub), substitute(f.right, sub))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in sub.items() if k not in f.variables}
        return type(f)(f.variables, substitute(f.body, inner))
    inner = {k: v for k, v in sub.items() if k not in f.params}
    return Fix(f.kind, f.pvar, f.params, substitute(f.body, inner), tuple(map(t, f.args)))


def replace_pvar(f: Formula, name: str, fn) -> Formula:
    """Rewrite every free application of predicate variable ``name`` with ``fn``."""
    if isinstance(f, PVar):
        return fn(f) if f.name == name else f
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(replace_pvar(f.arg, name, fn))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(replace_pvar(c, name, fn) for c in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(replace_pvar(f.left, name, fn), replace_pvar(f.right, name, fn))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.variables, replace_pvar(f.body, name, fn))
    if f.pvar == name:
        return f
    return Fix(f.kind, f.pvar, f.params, replace_pvar(f.body, name, fn), f.args)


def pvar_polarities(f: Formula, name: str, positive: bool = True) -> set[bool]:
    """Polarities under which ``name`` occurs free in ``f``."""
    if isinstance(f, PVar):
        return {positive} if f.name == name else set()
    if isinstance(f, ATOMIC):
        return set()
    if isinstance(f, Not):
        return pvar_polarities(f.arg, name, not positive)
    if isinstance(f, (And, Or)):
        out: set[bool] = set()
        for c in f.args:
            out |= pvar_polarities(c, name, positive)
        return out
    if isinstance(f, Implies):
        return pvar_polarities(f.left, name, not positive) | pvar_polarities(f.right, name, positive)
    if isinstance(f, Iff):
        both = pvar_polarities(f.left, name, True) | pvar_polarities(f.right, name, True)
        return {True, False} if both else set()
    if isinstance(f, (Forall, Exists)):
        return pvar_polarities(f.body, name, positive)
    if f.pvar == name:
        return set()
    return pvar_polarities(f.body, name, positive)


def is_positive_in(f: Formula, name: str) -> bool:
    return False not in pvar_polarities(f, name)


def width(f: Formula) -> int:
    """Largest number of free variables of any subformula."""
    return max(len(free_vars(g)) for g in walk(f))


def eliminate_gfp(f: Formula) -> Formula:
    """Rewrite greatest fixed points as negated least fixed points."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(eliminate_gfp(f.arg))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(eliminate_gfp(c) for c in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(eliminate_gfp(f.left), eliminate_gfp(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.variables, eliminate_gfp(f.body))
    body = eliminate_gfp(f.body)
    if f.kind == "lfp":
        return Fix("lfp", f.pvar, f.params, body, f.args)
    flipped = replace_pvar(body, f.pvar, lambda a: Not(a))
    return Not(Fix("lfp", f.pvar, f.params, Not(flipped), f.args))


# Text form -------------------------------------------------------------------

_LEVEL = {Iff: 0, Implies: 1, Or: 2, And: 3}


def _terms(args) -> str:
    return ",".join(str(t) for t in args)


def _vars(vs) -> str:
    return ",".join(v.name for v in vs)


def render(f: Formula, parent: int = -1) -> str:
    if isinstance(f, Rel):
        return f"{f.pred}({_terms(f.args)})" if f.args else f.pred
    if isinstance(f, PVar):
        return f"{f.name}({_terms(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{f.arg.left} != {f.arg.right}"
        return "~" + render(f.arg, 4)
    if isinstance(f, Forall):
        return f"forall {_vars(f.variables)} ({render(f.body)})"
    if isinstance(f, Exists):
        return f"exists {_vars(f.variables)} ({render(f.body)})"
    if isinstance(f, Fix):
        tag = "LFP" if f.kind == "lfp" else "GFP"
        return f"[{tag} {f.pvar}({_vars(f.params)}). {render(f.body)}]({_terms(f.args)})"
    level = _LEVEL[type(f)]
    if isinstance(f, (And, Or)):
        sym = " & " if isinstance(f, And) else " | "
        text = sym.join(render(c, level) for c in f.args)
    elif isinstance(f, Implies):
        text = f"{render(f.left, level)} -> {render(f.right, level - 1)}"
    else:
        text = f"{render(f.left, level)} <-> {render(f.right, level)}"
    return f"({text})" if parent >= level else text


def render_all(formulas: Iterable[Formula]) -> str:
    return "".join(render(f) + "\n" for f in formulas)


class _Reader:
    def __init__(self, text: str):
        from ..parser import tokenize

        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def at(self, *texts) -> bool:
        return self.tok.kind in ("op", "ident", "var") and self.tok.text in texts

    def take(self, text=None):
        from ..errors import ParseError

        tok = self.tok
        if text is not None and not self.at(text):
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.span)
        self.i += 1
        return tok

    def formulas(self) -> list[Formula]:
        out = []
        while self.tok.kind != "eof":
            out.append(self.iff())
        return out

    def iff(self) -> Formula:
        left = self.imp()
        if self.at("<->"):
            self.take()
            return Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        items = [self.conj()]
        while self.at("|"):
            self.take()
            items.append(self.conj())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conj(self) -> Formula:
        items = [self.unary()]
        while self.at("&"):
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def term(self) -> Term:
        from ..errors import ParseError
        from ..parser import _unquote

        tok = self.take()
        if tok.kind == "var":
            return Term(tok.text, True)
        if tok.kind in ("ident", "special", "number"):
            return Term(tok.text)
        if tok.kind == "string":
            return Term(_unquote(tok.text))
        raise ParseError(f"expected a term, found {tok.text!r}", tok.span)

    def term_list(self) -> tuple[Term, ...]:
        self.take("(")
        out = []
        if not self.at(")"):
            out.append(self.term())
            while self.at(","):
                self.take()
                out.append(self.term())
        self.take(")")
        return tuple(out)

    def var_list(self) -> tuple[Term, ...]:
        out = [self.term()]
        while self.at(","):
            self.take()
            out.append(self.term())
        return tuple(out)

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("~"):
            self.take()
            return Not(self.unary())
        if self.at("("):
            self.take()
            inner = self.iff()
            self.take(")")
            return inner
        if self.at("true", "false") and tok.kind == "ident":
            self.take()
            return TRUE if tok.text == "true" else FALSE
        if self.at("forall", "exists") and tok.kind == "ident":
            self.take()
            vs = self.var_list()
            self.take("(")
            body = self.iff()
            self.take(")")
            return (Forall if tok.text == "forall" else Exists)(vs, body)
        if self.at("["):
            self.take()
            kind = self.take().text.lower()
            name = self.take().text
            params = self.term_list()
            self.take(".")
            body = self.iff()
            self.take("]")
            return Fix(kind, name, params, body, self.term_list())
        nxt = self.toks[self.i + 1]
        if tok.kind == "var" and nxt.text == "(":
            self.take()
            return PVar(tok.text, self.term_list())
        if tok.kind in ("ident", "special") and not (nxt.kind == "op" and nxt.text in ("=", "!=")):
            self.take()
            args = self.term_list() if self.at("(") else ()
            return Rel(tok.text, args)
        left = self.term()
        op = self.take().text
        right = self.term()
        return Eq(left, right) if op == "=" else Not(Eq(left, right))


def parse_formulas(text: str) -> list[Formula]:
    return _Reader(text).formulas()

