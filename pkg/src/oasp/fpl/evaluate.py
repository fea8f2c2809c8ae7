"""Evaluation of fixed-point formulas over finite structures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .formula import (
    And,
    Const,
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
    free_pvars,
    free_vars,
    relations,
)


@dataclass
class FiniteStructure:
    """Domain elements double as the interpretation of same-named constants."""

    domain: tuple[str, ...]
    relations: dict[str, frozenset[tuple[str, ...]]] = field(default_factory=dict)

    def atoms(self) -> set[tuple[str, tuple[str, ...]]]:
        return {(p, t) for p, ts in self.relations.items() for t in ts}

    def __str__(self) -> str:
        parts = []
        for p in sorted(self.relations):
            for t in sorted(self.relations[p]):
                parts.append(f"{p}({','.join(t)})" if t else p)
        return "{" + ", ".join(parts) + "}"


class _Context:
    __slots__ = ("domain", "rels", "cache", "tuples", "trace")

    def __init__(self, structure: FiniteStructure, trace=None):
        self.domain = structure.domain
        self.rels = structure.relations
        self.cache: dict = {}
        self.tuples: dict[int, list] = {}
        self.trace = trace

    def product(self, n: int) -> list:
        got = self.tuples.get(n)
        if got is None:
            got = self.tuples[n] = list(itertools.product(self.domain, repeat=n))
        return got


Fn = Callable[[dict, dict, _Context], bool]
_EMPTY: frozenset = frozenset()


def _getter(terms):
    spec = tuple((t.is_var, t.name) for t in terms)
    if all(v for v, _ in spec):
        names = tuple(n for _, n in spec)
        return lambda env: tuple(env[n] for n in names)
    return lambda env: tuple(env[n] if v else n for v, n in spec)


def _compile(f: Formula) -> Fn:
    if isinstance(f, Rel):
        get, pred = _getter(f.args), f.pred
        return lambda env, pv, ctx: get(env) in ctx.rels.get(pred, _EMPTY)
    if isinstance(f, PVar):
        get, name = _getter(f.args), f.name
        return lambda env, pv, ctx: get(env) in pv[name]
    if isinstance(f, Eq):
        get = _getter((f.left, f.right))

        def eq(env, pv, ctx):
            a, b = get(env)
            return a == b

        return eq
    if isinstance(f, Const):
        value = f.value
        return lambda env, pv, ctx: value
    if isinstance(f, Not):
        inner = _compile(f.arg)
        return lambda env, pv, ctx: not inner(env, pv, ctx)
    if isinstance(f, And):
        parts = tuple(_compile(c) for c in f.args)

        def conj(env, pv, ctx):
            for p in parts:
                if not p(env, pv, ctx):
                    return False
            return True

        return conj
    if isinstance(f, Or):
        parts = tuple(_compile(c) for c in f.args)

        def disj(env, pv, ctx):
            for p in parts:
                if p(env, pv, ctx):
                    return True
            return False

        return disj
    if isinstance(f, Implies):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, pv, ctx: not left(env, pv, ctx) or right(env, pv, ctx)
    if isinstance(f, Iff):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, pv, ctx: left(env, pv, ctx) == right(env, pv, ctx)
    if isinstance(f, (Forall, Exists)):
        names = tuple(v.name for v in f.variables)
        body = _compile(f.body)
        want = isinstance(f, Exists)

        def quant(env, pv, ctx):
            local = dict(env)
            for combo in ctx.product(len(names)):
                for n, e in zip(names, combo):
                    local[n] = e
                if body(local, pv, ctx) == want:
                    return want
            return not want

        return quant
    if isinstance(f, Fix):
        return _compile_fix(f)
    raise TypeError(f"not a formula: {f!r}")


def _compile_fix(f: Fix) -> Fn:
    body = _compile(f.body)
    params = tuple(p.name for p in f.params)
    outer_vars = tuple(sorted(v.name for v in free_vars(f.body) - frozenset(f.params)))
    outer_pvars = tuple(sorted(free_pvars(f)))
    get = _getter(f.args)
    node_key = id(f)
    least = f.kind == "lfp"

    def fixed_set(env, pv, ctx) -> frozenset:
        key = (
            node_key,
            tuple(env[v] for v in outer_vars),
            tuple(pv[p] for p in outer_pvars),
        )
        got = ctx.cache.get(key)
        if got is not None:
            return got
        candidates = ctx.product(len(params))
        current = frozenset() if least else frozenset(candidates)
        local = dict(env)
        inner_pv = dict(pv)
        chain = [current]
        while True:
            inner_pv[f.pvar] = current
            nxt = set()
            for combo in candidates:
                for n, e in zip(params, combo):
                    local[n] = e
                if body(local, inner_pv, ctx):
                    nxt.add(combo)
            nxt = frozenset(nxt)
            if nxt == current:
                break
            current = nxt
            chain.append(current)
        if ctx.trace is not None:
            ctx.trace.append((f.pvar, f.kind, chain))
        ctx.cache[key] = current
        return current

    return lambda env, pv, ctx: get(env) in fixed_set(env, pv, ctx)


class CompiledFormula:
    def __init__(self, formula: Formula):
        self.formula = formula
        self.fn = _compile(formula)
        self.free = sorted(v.name for v in free_vars(formula))

    def holds(self, structure: FiniteStructure, env: dict | None = None, trace: list | None = None) -> bool:
        ctx = _Context(structure, trace)
        env = dict(env or {})
        missing = [v for v in self.free if v not in env]
        if missing:
            raise ValueError(f"unassigned free variables {missing}")
        return self.fn(env, {}, ctx)


def evaluate(formula: Formula, structure: FiniteStructure, env: dict | None = None, trace: list | None = None) -> bool:
    return CompiledFormula(formula).holds(structure, env, trace)


def all_hold(formulas: Iterable[CompiledFormula], structure: FiniteStructure) -> bool:
    ctx = _Context(structure)
    return all(c.fn({}, {}, ctx) for c in formulas)


def _subsets(domain: tuple[str, ...], arity: int) -> list[frozenset]:
    tuples = list(itertools.product(domain, repeat=arity))
    return [
        frozenset(t for i, t in enumerate(tuples) if mask >> i & 1) for mask in range(1 << len(tuples))
    ]


def all_structures(domain: Iterable[str], arities: dict[str, int], limit: int = 1 << 20) -> Iterator[FiniteStructure]:
    """Every structure over the domain for the given relation symbols."""
    domain = tuple(domain)
    names = sorted(arities)
    bits = sum(len(domain) ** arities[n] for n in names)
    if 1 << bits > limit:
        raise ValueError(f"{1 << bits} structures exceed the enumeration limit")
    choices = [_subsets(domain, arities[n]) for n in names]
    for combo in itertools.product(*choices):
        yield FiniteStructure(domain, dict(zip(names, combo)))


def _definition(f: Formula):
    """``(name, params, body)`` if f reads ``forall Xs (d(Xs) <-> body)``."""
    variables: tuple = ()
    if isinstance(f, Forall):
        variables, f = f.variables, f.body
    if not isinstance(f, Iff) or not isinstance(f.left, Rel):
        return None
    head = f.left
    if tuple(head.args) != tuple(variables) or len(set(variables)) != len(variables):
        return None
    if head.pred in relations(f.right):
        return None
    return head.pred, variables, f.right


def enumerate_models(
    formulas: list[Formula],
    domain: Iterable[str],
    free_arities: dict[str, int],
    limit: int = 1 << 20,
    use_definitions: bool = True,
) -> Iterator[FiniteStructure]:
    """Models over ``domain``.

    Relations fixed by an explicit definition ``forall Xs (d(Xs) <-> body)``
    are computed from the body instead of being guessed; with
    ``use_definitions=False`` every relation is enumerated.
    """
    domain = tuple(domain)
    vocab: dict[str, int] = dict(free_arities)
    for f in formulas:
        vocab.update(relations(f))
    defs = {}
    if use_definitions:
        for f in formulas:
            d = _definition(f)
            if d is not None and d[0] not in free_arities and d[0] not in defs:
                defs[d[0]] = (d[1], CompiledFormula(d[2]), set(relations(d[2])))
    order = []
    pending = dict(defs)
    while pending:
        ready = [n for n, (_, _, deps) in pending.items() if not (deps & set(pending))]
        if not ready:
            for n in list(pending):
                del defs[n]
            break
        for n in sorted(ready):
            order.append(n)
            del pending[n]
    guessed = {n: a for n, a in vocab.items() if n not in defs}
    compiled = [CompiledFormula(f) for f in formulas]
    for base in all_structures(domain, guessed, limit):
        rels = dict(base.relations)
        structure = FiniteStructure(domain, rels)
        for name in order:
            params, body, _ = defs[name]
            names = [p.name for p in params]
            ctx = _Context(structure)
            rels[name] = frozenset(
                combo for combo in ctx.product(len(names)) if body.fn(dict(zip(names, combo)), {}, ctx)
            )
        if all_hold(compiled, structure):
            yield structure
