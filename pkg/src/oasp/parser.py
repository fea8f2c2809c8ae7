"""Surface syntax for programs and CTL formulas.

Programs::

    % comment
    r1: p(X) v not q(X) :- r(X,Y), not s(Y), X != a, forall Z (t(Z) & ~u(Z) => w(Z)).

Rendering produces canonical text that parses back to an equal structure.
"""

from __future__ import annotations

import re
from typing import Iterator, NamedTuple

from . import ctl_syntax as C
from .errors import OaspError, ParseError, SourceSpan
from .model import (
    EQ,
    KEYWORDS,
    Atom,
    BAnd,
    BNot,
    BOr,
    BoolFormula,
    GeneralizedLiteral,
    Literal,
    Program,
    Rule,
    Term,
    formula_text,
)


CLASSICAL_PREFIX = "neg_"


class Token(NamedTuple):
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<special>\#[A-Za-z0-9_]+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<op><->|->|:-|=>|!=|[-=:(),.&|~\[\]!{}])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        span = SourceSpan(line, pos - line_start + 1, pos, m.end())
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, span))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, pos, pos)))
    return tokens


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str) -> None:
        got = self.tok.text or "end of input"
        raise ParseError(f"{message}, found {got!r}", self.tok.span)


class _ProgramParser(_Cursor):
    def program(self) -> Program:
        rules = []
        spans = []
        self.classical: set[tuple[str, int]] = set()
        while self.tok.kind != "eof":
            spans.append(self.tok.span)
            rules.append(self.rule())
        # classical negation -p compiles to a fresh predicate kept consistent with p
        for name, arity in sorted(self.classical):
            args = tuple(Term(f"X{i}", True) for i in range(1, arity + 1))
            body = (Literal(Atom(name, args)), Literal(Atom(CLASSICAL_PREFIX + name, args)))
            rules.append(Rule((), body, (), f"consistent_{name}"))
        try:
            return Program(tuple(rules))
        except OaspError as exc:
            # point at the first rule whose addition breaks the program
            for end in range(1, len(spans) + 1):
                try:
                    Program(tuple(rules[:end]))
                except OaspError:
                    raise ParseError(str(exc), spans[end - 1]) from None
            raise ParseError(str(exc), spans[-1] if spans else None) from None

    def rule(self) -> Rule:
        start = self.tok.span
        name = None
        if self.tok.kind in ("ident", "special") and self.peek().kind == "op" and self.peek().text == ":":
            name = self.advance().text
            self.advance()
        head: list[Literal] = []
        if not self.at(":-"):
            head.append(self.literal(in_head=True))
            while self.at("v", "|"):
                self.advance()
                head.append(self.literal(in_head=True))
        body: list[Literal] = []
        glits: list[GeneralizedLiteral] = []
        if self.at(":-"):
            self.advance()
            while True:
                if self.at("forall"):
                    glits.append(self.glit())
                else:
                    body.append(self.literal(in_head=False))
                if not self.at(","):
                    break
                self.advance()
        elif not head:
            self.fail("expected a rule")
        self.expect(".")
        try:
            return Rule(tuple(head), tuple(body), tuple(glits), name)
        except OaspError as exc:
            raise ParseError(str(exc), start) from None

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "var":
            self.advance()
            return Term(tok.text, True)
        if tok.kind in ("ident", "special", "number"):
            if tok.text in KEYWORDS:
                self.fail("expected a term")
            self.advance()
            return Term(tok.text, False)
        if tok.kind == "string":
            self.advance()
            return Term(_unquote(tok.text), False)
        self.fail("expected a term")

    def atomish(self) -> tuple[Atom, bool]:
        """An atom or an (in)equality; the flag marks ``!=``."""
        classical = False
        if self.at("-") and self.peek().kind == "ident":
            self.advance()
            classical = True
        tok = self.tok
        if classical or (tok.kind in ("ident", "special") and tok.text not in KEYWORDS):
            nxt = self.peek()
            if not (nxt.kind == "op" and nxt.text in ("=", "!=")):
                self.advance()
                args: list[Term] = []
                if self.at("("):
                    self.advance()
                    args.append(self.term())
                    while self.at(","):
                        self.advance()
                        args.append(self.term())
                    self.expect(")")
                if classical:
                    if hasattr(self, "classical"):
                        self.classical.add((tok.text, len(args)))
                    return Atom(CLASSICAL_PREFIX + tok.text, tuple(args)), False
                return Atom(tok.text, tuple(args)), False
        left = self.term()
        if not self.at("=", "!="):
            self.fail("expected '=' or '!='")
        negated = self.advance().text == "!="
        right = self.term()
        return Atom(EQ, (left, right)), negated

    def literal(self, in_head: bool) -> Literal:
        if self.at("forall"):
            where = "head" if in_head else "this position"
            raise ParseError(f"generalized literal not allowed in {where}", self.tok.span)
        negated = False
        if self.at("not"):
            self.advance()
            negated = True
        span = self.tok.span
        atom, neq = self.atomish()
        if neq and negated:
            raise ParseError("double negation of an equality", span)
        negated = negated or neq
        if in_head and not negated and atom.is_equality:
            raise ParseError("equality cannot occur positively in a rule head", span)
        return Literal(atom, negated)

    def glit(self) -> GeneralizedLiteral:
        self.expect("forall")
        bound = [self.bound_var()]
        while self.at(","):
            self.advance()
            bound.append(self.bound_var())
        self.expect("(")
        antecedent = self.boolform()
        self.expect("=>")
        span = self.tok.span
        consequent, neq = self.atomish()
        if neq:
            raise ParseError("the consequent of a generalized literal is an atom", span)
        self.expect(")")
        try:
            return GeneralizedLiteral(tuple(bound), antecedent, consequent)
        except OaspError as exc:
            raise ParseError(str(exc), span) from None

    def bound_var(self) -> Term:
        if self.tok.kind != "var":
            self.fail("expected a variable")
        return Term(self.advance().text, True)

    def boolform(self) -> BoolFormula:
        items = [self.conjunction()]
        while self.at("|"):
            self.advance()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else BOr(tuple(items))

    def conjunction(self) -> BoolFormula:
        items = [self.unary()]
        while self.at("&"):
            self.advance()
            items.append(self.unary())
        return items[0] if len(items) == 1 else BAnd(tuple(items))

    def unary(self) -> BoolFormula:
        if self.at("~", "not"):
            self.advance()
            return BNot(self.unary())
        if self.at("("):
            self.advance()
            inner = self.boolform()
            self.expect(")")
            return inner
        atom, neq = self.atomish()
        return BNot(atom) if neq else atom


def parse_program(text: str) -> Program:
    return _ProgramParser(tokenize(text)).program()


def parse_rule(text: str) -> Rule:
    program = parse_program(text)
    if len(program) != 1:
        raise ParseError(f"expected exactly one rule, got {len(program)}")
    return program.rules[0]


def parse_atoms(text: str) -> frozenset[Atom]:
    """Comma-separated ground atoms, optionally inside braces."""
    cur = _ProgramParser(tokenize(text))
    atoms = []
    braced = cur.at("{")
    if braced:
        cur.advance()
    while cur.tok.kind != "eof" and not cur.at("}"):
        atom, neq = cur.atomish()
        if neq or atom.is_equality:
            cur.fail("expected a regular atom")
        if not atom.is_ground():
            raise ParseError(f"atom {atom} is not ground")
        atoms.append(atom)
        if cur.at(","):
            cur.advance()
    return frozenset(atoms)


def render_literal(lit: Literal) -> str:
    return str(lit)


def render_rule(rule: Rule, with_name: bool = True) -> str:
    head = " v ".join(str(lit) for lit in rule.head)
    body = [str(lit) for lit in rule.body] + [str(g) for g in rule.glits]
    prefix = f"{rule.name}: " if with_name and rule.name else ""
    if not body:
        return f"{prefix}{head}."
    if not head:
        return f"{prefix}:- {', '.join(body)}."
    return f"{prefix}{head} :- {', '.join(body)}."


def render_program(program: Program, with_names: bool = True) -> str:
    return "".join(render_rule(r, with_names) + "\n" for r in program.rules)


def render_formula(f: BoolFormula) -> str:
    return formula_text(f)


# CTL

_CTL_WORDS = {"AF", "AG", "AX", "EF", "EG", "EX", "A", "E", "U", "X", "F", "G"}


class _CtlParser(_Cursor):
    def at_word(self, *words: str) -> bool:
        return self.tok.kind == "var" and self.tok.text in words

    def formula(self) -> C.Formula:
        left = self.implication()
        if self.at("<->"):
            self.advance()
            return C.Iff(left, self.formula())
        return left

    def implication(self) -> C.Formula:
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return C.Implies(left, self.implication())
        return left

    def disjunction(self) -> C.Formula:
        left = self.conjunction()
        while self.at("|"):
            self.advance()
            left = C.Or(left, self.conjunction())
        return left

    def conjunction(self) -> C.Formula:
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = C.And(left, self.unary())
        return left

    def unary(self) -> C.Formula:
        tok = self.tok
        if self.at("~", "!"):
            self.advance()
            return C.Not(self.unary())
        if self.at("("):
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            if tok.text == "true":
                return C.Top()
            if tok.text == "false":
                return C.Not(C.Top())
            return C.Prop(tok.text)
        if tok.kind == "var" and tok.text in C.UNARY_OPS:
            self.advance()
            return C.Unary(tok.text, self.unary())
        if tok.kind == "var" and tok.text in ("E", "A"):
            self.advance()
            if self.at_word("X", "F", "G"):
                op = tok.text + self.advance().text
                return C.Unary(op, self.unary())
            closer = {"(": ")", "[": "]"}
            if not self.at("(", "["):
                self.fail("expected '(' or '[' after path quantifier")
            close = closer[self.advance().text]
            left = self.formula()
            if not self.at_word("U"):
                self.fail("expected 'U'")
            self.advance()
            right = self.formula()
            self.expect(close)
            return C.Until(tok.text, left, right)
        self.fail("expected a CTL formula")


def parse_ctl(text: str) -> C.Formula:
    cur = _CtlParser(tokenize(text))
    f = cur.formula()
    if cur.tok.kind != "eof":
        cur.fail("unexpected trailing input")
    return f


def render_ctl(f: C.Formula) -> str:
    return C.render_ctl(f)
