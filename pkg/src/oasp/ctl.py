"""CTL: normalization, Kripke structures, model checking, brute-force
satisfiability and the translation to guarded programs with generalized literals."""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .ctl_syntax import (
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    Top,
    Unary,
    Until,
    propositions,
    render_ctl,
    subformulas,
)
from .errors import OaspError, ResourceError
from .model import (
    Atom,
    GeneralizedLiteral,
    OpenInterpretation,
    Program,
    Rule,
    Term,
    Universe,
    eq_atom,
    fresh_elements,
    naf,
    pos,
)


class StructureError(OaspError):
    """A Kripke structure is malformed (unknown state, non-total transitions)."""


# normalization


def _neg(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def is_normal(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Or, Implies, Iff)):
            return False
        if isinstance(g, Unary) and g.op not in ("EX", "AF"):
            return False
        if isinstance(g, Until) and g.quant != "E":
            return False
    return True


def normalize(f: Formula) -> Formula:
    """Equivalent formula built from propositions, true, ~, &, EX, AF and E(_ U _)."""
    if isinstance(f, (Prop, Top)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.arg))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Not(And(_neg(normalize(f.left)), _neg(normalize(f.right))))
    if isinstance(f, Implies):
        return Not(And(normalize(f.left), _neg(normalize(f.right))))
    if isinstance(f, Iff):
        a, b = normalize(f.left), normalize(f.right)
        return And(Not(And(a, _neg(b))), Not(And(b, _neg(a))))
    if isinstance(f, Until):
        q, r = normalize(f.left), normalize(f.right)
        if f.quant == "E":
            return Until("E", q, r)
        # A(q U r) = ~E(~r U ~q & ~r) & AF r
        return And(Not(Until("E", _neg(r), And(_neg(q), _neg(r)))), Unary("AF", r))
    q = normalize(f.arg)
    op = f.op
    if op in ("EX", "AF"):
        return Unary(op, q)
    if op == "AX":
        return Not(Unary("EX", _neg(q)))
    if op == "EF":
        return Until("E", Top(), q)
    if op == "AG":
        return Not(Until("E", Top(), _neg(q)))
    if op == "EG":
        return Not(Unary("AF", _neg(q)))
    raise ValueError(f"unknown operator {op}")


# Kripke structures and model checking


@dataclass(frozen=True)
class Kripke:
    states: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "labels", {s: frozenset(self.labels.get(s, ())) for s in self.states})
        known = set(self.states)
        for s, t in self.edges:
            if s not in known or t not in known:
                raise StructureError(f"edge ({s},{t}) mentions an unknown state")
        for s in self.states:
            if not any(e[0] == s for e in self.edges):
                raise StructureError(f"state {s} has no successor; the transition relation must be total")

    def successors(self, s: str) -> list[str]:
        return sorted(t for u, t in self.edges if u == s)

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "edges": sorted([s, t] for s, t in self.edges),
            "labels": {s: sorted(self.labels[s]) for s in self.states},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Kripke":
        return cls(tuple(data["states"]), frozenset(map(tuple, data["edges"])), data.get("labels", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def satisfying_states(k: Kripke, f: Formula) -> frozenset[str]:
    succ = {s: k.successors(s) for s in k.states}
    everything = frozenset(k.states)
    memo: dict[Formula, frozenset[str]] = {}

    def ex(z):
        return frozenset(s for s in k.states if any(t in z for t in succ[s]))

    def ax(z):
        return frozenset(s for s in k.states if all(t in z for t in succ[s]))

    def lfp(step):
        z = frozenset()
        while True:
            nxt = step(z)
            if nxt == z:
                return z
            z = nxt

    def gfp(step):
        z = everything
        while True:
            nxt = step(z)
            if nxt == z:
                return z
            z = nxt

    for g in subformulas(f):
        if g in memo:
            continue
        if isinstance(g, Prop):
            val = frozenset(s for s in k.states if g.name in k.labels[s])
        elif isinstance(g, Top):
            val = everything
        elif isinstance(g, Not):
            val = everything - memo[g.arg]
        elif isinstance(g, And):
            val = memo[g.left] & memo[g.right]
        elif isinstance(g, Or):
            val = memo[g.left] | memo[g.right]
        elif isinstance(g, Implies):
            val = (everything - memo[g.left]) | memo[g.right]
        elif isinstance(g, Iff):
            a, b = memo[g.left], memo[g.right]
            val = (a & b) | (everything - a - b)
        elif isinstance(g, Until):
            q, r = memo[g.left], memo[g.right]
            nxt = ex if g.quant == "E" else ax
            val = lfp(lambda z: r | (q & nxt(z)))
        else:
            q = memo[g.arg]
            val = {
                "EX": lambda: ex(q),
                "AX": lambda: ax(q),
                "EF": lambda: lfp(lambda z: q | ex(z)),
                "AF": lambda: lfp(lambda z: q | ax(z)),
                "EG": lambda: gfp(lambda z: q & ex(z)),
                "AG": lambda: gfp(lambda z: q & ax(z)),
            }[g.op]()
        memo[g] = val
    return memo[f]


def model_check(k: Kripke, state: str, f: Formula) -> bool:
    if state not in k.states:
        raise StructureError(f"unknown state {state}")
    return state in satisfying_states(k, f)


# brute-force satisfiability


def _permutations_key(n: int, edges: tuple, labels: tuple) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        e = tuple(sorted((perm[s], perm[t]) for s, t in edges))
        lab = [None] * n
        for i, l in enumerate(labels):
            lab[perm[i]] = l
        key = (e, tuple(lab))
        if best is None or key < best:
            best = key
    return best


@functools.lru_cache(maxsize=None)
def canonical_structures(n: int, props: tuple[str, ...]) -> tuple[Kripke, ...]:
    """One structure per isomorphism class with exactly n states over props."""
    names = [f"s{i}" for i in range(n)]
    succ_choices = [c for r in range(1, n + 1) for c in itertools.combinations(range(n), r)]
    label_choices = [
        frozenset(c) for r in range(len(props) + 1) for c in itertools.combinations(props, r)
    ]
    label_keys = [tuple(sorted(l)) for l in label_choices]
    seen = set()
    out = []
    for succs in itertools.product(succ_choices, repeat=n):
        edges = tuple((s, t) for s in range(n) for t in succs[s])
        for labs in itertools.product(range(len(label_choices)), repeat=n):
            labels = tuple(label_keys[i] for i in labs)
            key = _permutations_key(n, edges, labels)
            if key in seen:
                continue
            seen.add(key)
            out.append(
                Kripke(
                    tuple(names),
                    frozenset((names[s], names[t]) for s, t in edges),
                    {names[i]: label_choices[labs[i]] for i in range(n)},
                )
            )
    return tuple(out)


def sat_oracle(
    f: Formula, n_max: int, exact: bool = False, max_structures: int = 200_000
) -> tuple[Kripke, str] | None:
    """A structure with at most (or, with ``exact``, exactly) n_max states and a
    state satisfying f, searched over canonical structures."""
    props = tuple(sorted(propositions(f)))
    sizes = [n_max] if exact else range(1, n_max + 1)
    for n in sizes:
        count = (2 ** n - 1) ** n * (2 ** len(props)) ** n
        if count > max_structures:
            raise ResourceError(f"{count} candidate structures with {n} states exceed the budget")
        for k in canonical_structures(n, props):
            good = satisfying_states(k, f)
            if good:
                return k, min(good)
    return None


# encoding into a guarded program


S = Term.var("S")
N = Term.var("N")
NEXT = "next"
SUCC = "succ"
_MAX_NAME = 40


def _polish(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "TOP"
    if isinstance(f, Not):
        return "NOT_" + _polish(f.arg)
    if isinstance(f, And):
        return f"AND_{_polish(f.left)}_{_polish(f.right)}"
    if isinstance(f, Until):
        return f"{f.quant}U_{_polish(f.left)}_{_polish(f.right)}"
    if isinstance(f, Unary):
        return f"{f.op}_{_polish(f.arg)}"
    raise ValueError(f"formula {render_ctl(f)} is not normalized")


def pred_name(f: Formula) -> str:
    """Predicate standing for f; long names fall back to a digest of the formula."""
    if isinstance(f, Prop):
        return "pr_" + f.name
    name = "pr_" + _polish(f)
    if len(name) > _MAX_NAME:
        digest = hashlib.sha1(render_ctl(f).encode()).hexdigest()[:12]
        name = "pr_h" + digest
    return name


@dataclass(frozen=True)
class Encoding:
    formula: Formula
    program: Program
    root: str
    mapping: dict = field(compare=False, hash=False)

    def to_json(self) -> dict:
        return {"root": self.root, "predicates": dict(sorted(self.mapping.items()))}


def generating_rules(props: Iterable[str]) -> list[Rule]:
    rules = []
    for p in sorted(props):
        a = Atom("pr_" + p, (S,))
        rules.append(Rule((pos(a), naf(a)), name=f"g1_{p}"))
    nxt = Atom(NEXT, (S, N))
    rules.append(Rule((pos(nxt), naf(nxt)), name="g2"))
    rules.append(Rule((pos(Atom(SUCC, (S,))),), (pos(nxt),), name="g3"))
    rules.append(Rule((), (pos(eq_atom(S, S)), naf(Atom(SUCC, (S,)))), name="g3c"))
    return rules


def defining_rules(f: Formula) -> list[Rule]:
    rules = []
    seen = set()
    for g in subformulas(f):
        if g in seen or isinstance(g, Prop):
            continue
        seen.add(g)
        head = pos(Atom(pred_name(g), (S,)))
        tag = pred_name(g)[3:]
        if isinstance(g, Top):
            rules.append(Rule((head,), (pos(eq_atom(S, S)),), name="d_" + tag))
        elif isinstance(g, Not):
            rules.append(Rule((head,), (naf(Atom(pred_name(g.arg), (S,))),), name="d1_" + tag))
        elif isinstance(g, And):
            body = (pos(Atom(pred_name(g.left), (S,))), pos(Atom(pred_name(g.right), (S,))))
            rules.append(Rule((head,), body, name="d2_" + tag))
        elif isinstance(g, Unary) and g.op == "AF":
            rules.append(Rule((head,), (pos(Atom(pred_name(g.arg), (S,))),), name="d31_" + tag))
            glit = GeneralizedLiteral((N,), Atom(NEXT, (S, N)), Atom(pred_name(g), (N,)))
            rules.append(Rule((head,), (), (glit,), name="d32_" + tag))
        elif isinstance(g, Until) and g.quant == "E":
            rules.append(Rule((head,), (pos(Atom(pred_name(g.right), (S,))),), name="d4_" + tag))
            body = (
                pos(Atom(pred_name(g.left), (S,))),
                pos(Atom(NEXT, (S, N))),
                pos(Atom(pred_name(g), (N,))),
            )
            rules.append(Rule((head,), body, name="d5_" + tag))
        elif isinstance(g, Unary) and g.op == "EX":
            body = (pos(Atom(NEXT, (S, N))), pos(Atom(pred_name(g.arg), (N,))))
            rules.append(Rule((head,), body, name="d6_" + tag))
        else:
            raise ValueError(f"formula {render_ctl(g)} is not normalized")
    return rules


def encode(f: Formula) -> Encoding:
    """Generating rules plus one defining group per subformula; f is normalized first."""
    g = normalize(f)
    rules = generating_rules(propositions(g)) + defining_rules(g)
    mapping = {}
    for sub in subformulas(g):
        mapping[pred_name(sub)] = render_ctl(sub)
    return Encoding(g, Program(tuple(rules)), pred_name(g), mapping)


def decode(interp: OpenInterpretation, f: Formula) -> tuple[Kripke, str]:
    """Structure read off an answer set, with a state where the root predicate holds."""
    root = pred_name(normalize(f))
    hits = sorted(a.args[0].name for a in interp.atoms if a.pred == root)
    if not hits:
        raise StructureError(f"no {root} atom in the interpretation")
    states = tuple(interp.universe)
    edges = frozenset((a.args[0].name, a.args[1].name) for a in interp.atoms if a.pred == NEXT)
    props = propositions(f)
    labels = {
        s: {p for p in props if Atom("pr_" + p, (Term.const(s),)) in interp.atoms} for s in states
    }
    return Kripke(states, edges, labels), hits[0]


def oasp_sat(f: Formula, n: int, budget=None) -> OpenInterpretation | None:
    """Open answer set of the encoding over exactly n anonymous elements with a root atom."""
    from .solver import find_open_answer_set

    enc = encode(f)
    universe = Universe(tuple(fresh_elements(n)))
    goal = Atom(enc.root, (Term.const(universe.elements[0]),))
    return find_open_answer_set(enc.program, universe, [goal], budget)


@dataclass
class DualVerdict:
    formula: str
    states: int
    oracle: bool
    oasp: bool
    witness_checked: bool | None

    @property
    def agree(self) -> bool:
        return self.oracle == self.oasp and self.witness_checked is not False

    def to_json(self) -> dict:
        return {
            "formula": self.formula,
            "states": self.states,
            "oracle": self.oracle,
            "oasp": self.oasp,
            "witness_checked": self.witness_checked,
            "agree": self.agree,
        }


def dual_check(f: Formula, n: int, budget=None) -> DualVerdict:
    oracle = sat_oracle(f, n, exact=True) is not None
    interp = oasp_sat(f, n, budget)
    checked = None
    if interp is not None:
        k, s = decode(interp, f)
        checked = model_check(k, s, f)
    return DualVerdict(render_ctl(f), n, oracle, interp is not None, checked)


# formula families


def formulas_up_to(props: tuple[str, ...], max_temporal: int, max_size: int) -> Iterator[Formula]:
    """Formulas over props in the full syntax, by node count, without duplicates."""
    by_size: dict[int, list[tuple[Formula, int]]] = {1: [(Prop(p), 0) for p in props] + [(Top(), 0)]}
    for size in range(2, max_size + 1):
        out = []
        for f, t in by_size.get(size - 1, []):
            out.append((Not(f), t))
            if t < max_temporal:
                for op in ("EX", "AX", "EF", "AF", "EG", "AG"):
                    out.append((Unary(op, f), t + 1))
        for ls in range(1, size - 1):
            rs = size - 1 - ls
            for (l, tl), (r, tr) in itertools.product(by_size.get(ls, []), by_size.get(rs, [])):
                t = tl + tr
                if t <= max_temporal:
                    out.extend([(And(l, r), t), (Or(l, r), t), (Implies(l, r), t), (Iff(l, r), t)])
                if t + 1 <= max_temporal:
                    out.extend([(Until("E", l, r), t + 1), (Until("A", l, r), t + 1)])
        by_size[size] = out
    for size in range(1, max_size + 1):
        for f, _ in by_size.get(size, []):
            yield f


def rename_props(f: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(f, Prop):
        return Prop(mapping.get(f.name, f.name))
    if isinstance(f, Top):
        return f
    if isinstance(f, Not):
        return Not(rename_props(f.arg, mapping))
    if isinstance(f, Unary):
        return Unary(f.op, rename_props(f.arg, mapping))
    if isinstance(f, Until):
        return Until(f.quant, rename_props(f.left, mapping), rename_props(f.right, mapping))
    return type(f)(rename_props(f.left, mapping), rename_props(f.right, mapping))


def distinct_normalized(props: tuple[str, ...], max_temporal: int, max_size: int) -> list[Formula]:
    """First formula of every class with the same normal form up to renaming propositions."""
    seen = set()
    out = []
    perms = [dict(zip(props, p)) for p in itertools.permutations(props)]
    for f in formulas_up_to(props, max_temporal, max_size):
        g = normalize(f)
        key = min(render_ctl(rename_props(g, m)) for m in perms)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out
