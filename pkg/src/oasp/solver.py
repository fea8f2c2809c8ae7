"""Search for open answer sets over explicit finite universes.

The ground program is compiled to integer form.  Search assigns atoms one at a
time and propagates with three rules:

* every rule, read as a clause, must be satisfied;
* a true atom needs at least one rule that can still support it, and when only
  one is left that rule's body is forced;
* atoms outside the least model of the optimistic reduct are false.

Every answer set found is certified by ``semantics`` before it is returned.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ResourceError, UniverseError
from .grounder import GroundProgram, as_universe, ground
from .model import (
    Atom,
    BAnd,
    BNot,
    BOr,
    OpenInterpretation,
    Program,
    Rule,
    Term,
    Universe,
    fresh_elements,
    naf,
    pos,
    program_signature,
    substitute_formula,
)
from . import semantics

DEFAULT_MAX_ATOMS = 5000
DEFAULT_MAX_NODES = 2_000_000


@dataclass(frozen=True)
class Budget:
    max_atoms: int = DEFAULT_MAX_ATOMS
    max_nodes: int = DEFAULT_MAX_NODES

    @classmethod
    def default(cls) -> "Budget":
        raw = os.environ.get("OASP_BUDGET")
        return cls(max_nodes=int(raw)) if raw else cls()


SAT = "SAT"
UNSAT_UP_TO_BOUND = "UNSAT_UP_TO_BOUND"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SatResult:
    status: str
    witness: OpenInterpretation | None
    bound_reached: int
    detail: str = ""

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "bound_reached": self.bound_reached, "witness": None}
        if self.witness is not None:
            out["witness"] = {
                "universe": list(self.witness.universe.elements),
                "atoms": sorted(str(a) for a in self.witness.atoms),
            }
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# Compiled form -------------------------------------------------------------

_DROP = object()


class _Rule:
    __slots__ = ("head", "hneg", "bpos", "bneg", "glits", "free")

    def __init__(self, head, hneg, bpos, bneg, glits, free):
        self.head = head
        self.hneg = hneg
        self.bpos = bpos
        self.bneg = bneg
        self.glits = glits  # tuple of tuples of (antecedent, consequent)
        self.free = free


def _ev(f, val) -> int:
    if type(f) is int:
        return val[f]
    tag = f[0]
    if tag == "n":
        return -_ev(f[1], val)
    if tag == "c":
        return f[1]
    if tag == "&":
        res = 1
        for g in f[1]:
            v = _ev(g, val)
            if v == -1:
                return -1
            if v == 0:
                res = 0
        return res
    res = -1
    for g in f[1]:
        v = _ev(g, val)
        if v == 1:
            return 1
        if v == 0:
            res = 0
    return res


def _glit_status(insts, val) -> int:
    status = 1
    for ante, cons in insts:
        a = _ev(ante, val)
        if a == -1:
            continue
        c = val[cons] if cons >= 0 else -1
        if c == 1:
            continue
        if a == 1 and c == -1:
            return -1
        status = 0
    return status


class _Conflict(Exception):
    pass


class CompiledProgram:
    def __init__(self, grounded: GroundProgram, max_atoms: int = DEFAULT_MAX_ATOMS):
        self.universe = grounded.universe
        self.atoms: list[Atom] = []
        self.index: dict[Atom, int] = {}
        self.max_atoms = max_atoms
        self.rules: list[_Rule] = []
        terms = grounded.universe.terms()
        for rule in grounded.rules:
            compiled = self._compile_rule(rule, terms)
            if compiled is not None:
                self.rules.append(compiled)
        n = len(self.atoms)
        self.occ: list[list[int]] = [[] for _ in range(n)]
        self.heads: list[list[int]] = [[] for _ in range(n)]
        for ri, r in enumerate(self.rules):
            if r.head >= 0:
                self.heads[r.head].append(ri)
            seen = set(r.hneg) | set(r.bpos) | set(r.bneg)
            for insts in r.glits:
                for ante, cons in insts:
                    seen |= _ante_atoms(ante)
                    if cons >= 0:
                        seen.add(cons)
            for x in seen:
                self.occ[x].append(ri)

    def atom_id(self, atom: Atom) -> int:
        i = self.index.get(atom)
        if i is None:
            i = len(self.atoms)
            if i >= self.max_atoms:
                raise ResourceError(f"more than {self.max_atoms} ground atoms")
            self.index[atom] = i
            self.atoms.append(atom)
        return i

    def _compile_formula(self, f):
        if isinstance(f, Atom):
            if f.is_equality:
                return ("c", 1 if f.args[0].name == f.args[1].name else -1)
            return self.atom_id(f)
        if isinstance(f, BNot):
            inner = self._compile_formula(f.arg)
            if type(inner) is tuple and inner[0] == "c":
                return ("c", -inner[1])
            return ("n", inner)
        parts = [self._compile_formula(a) for a in f.args]
        absorbing = -1 if isinstance(f, BAnd) else 1
        kept = []
        for p in parts:
            if type(p) is tuple and p[0] == "c":
                if p[1] == absorbing:
                    return ("c", absorbing)
                continue
            kept.append(p)
        if not kept:
            return ("c", -absorbing)
        if len(kept) == 1:
            return kept[0]
        return ("&" if isinstance(f, BAnd) else "|", tuple(kept))

    def _compile_rule(self, rule: Rule, terms) -> _Rule | None:
        hneg = []
        for a in rule.head_neg:
            if a.is_equality:
                if a.args[0].name != a.args[1].name:
                    return None
            else:
                hneg.append(self.atom_id(a))
        bpos = []
        for a in rule.body_pos:
            if a.is_equality:
                if a.args[0].name != a.args[1].name:
                    return None
            else:
                bpos.append(self.atom_id(a))
        bneg = []
        for a in rule.body_neg:
            if a.is_equality:
                if a.args[0].name == a.args[1].name:
                    return None
            else:
                bneg.append(self.atom_id(a))
        glits = []
        for g in rule.glits:
            insts = []
            for combo in itertools.product(terms, repeat=len(g.bound)):
                sub = dict(zip(g.bound, combo))
                ante = self._compile_formula(substitute_formula(g.antecedent, sub))
                if type(ante) is tuple and ante[0] == "c" and ante[1] == -1:
                    continue
                cons_atom = g.consequent.substitute(sub)
                if cons_atom.is_equality:
                    if cons_atom.args[0].name == cons_atom.args[1].name:
                        continue
                    cons = -1
                else:
                    cons = self.atom_id(cons_atom)
                insts.append((ante, cons))
            if insts:
                glits.append(tuple(insts))
        head = self.atom_id(rule.head_pos) if rule.head_pos is not None else -1
        free = rule.is_free()
        return _Rule(head, tuple(hneg), tuple(bpos), tuple(bneg), tuple(glits), free)


def _ante_atoms(f) -> set[int]:
    if type(f) is int:
        return {f}
    if f[0] == "c":
        return set()
    if f[0] == "n":
        return _ante_atoms(f[1])
    out: set[int] = set()
    for g in f[1]:
        out |= _ante_atoms(g)
    return out


class _Search:
    def __init__(self, prog: CompiledProgram, max_nodes: int, fixed_false: Iterable[int] = ()):
        self.p = prog
        n = len(prog.atoms)
        self.val = [0] * n
        self.trail: list[int] = []
        self.max_nodes = max_nodes
        self.nodes = 0
        self.queue: list[int] = []
        counts = [len(prog.occ[i]) + len(prog.heads[i]) for i in range(n)]
        self.order = sorted(range(n), key=lambda i: (-counts[i], i))
        self.initial_false = list(fixed_false)

    # assignment ------------------------------------------------------

    def assign(self, x: int, v: int) -> None:
        cur = self.val[x]
        if cur == v:
            return
        if cur != 0:
            raise _Conflict
        self.val[x] = v
        self.trail.append(x)
        self.queue.append(x)

    def undo(self, mark: int) -> None:
        val, trail = self.val, self.trail
        while len(trail) > mark:
            val[trail.pop()] = 0
        self.queue.clear()

    # propagation ----------------------------------------------------

    def _clause(self, r: _Rule) -> None:
        val = self.val
        unknown = None
        n_unknown = 0
        for b in r.bpos:
            v = val[b]
            if v == -1:
                return
            if v == 0:
                n_unknown += 1
                unknown = (b, -1)
        for c in r.bneg:
            v = val[c]
            if v == 1:
                return
            if v == 0:
                n_unknown += 1
                unknown = (c, 1)
        for d in r.hneg:
            v = val[d]
            if v == -1:
                return
            if v == 0:
                n_unknown += 1
                unknown = (d, -1)
        h = r.head
        if h >= 0:
            v = val[h]
            if v == 1:
                return
            if v == 0:
                n_unknown += 1
                unknown = (h, 1)
        glit_open = False
        for insts in r.glits:
            s = _glit_status(insts, val)
            if s == -1:
                return
            if s == 0:
                glit_open = True
        if glit_open:
            return
        if n_unknown == 0:
            raise _Conflict
        if n_unknown == 1:
            self.assign(*unknown)

    def _possible(self, r: _Rule) -> bool:
        val = self.val
        for b in r.bpos:
            if val[b] == -1:
                return False
        for c in r.bneg:
            if val[c] == 1:
                return False
        for d in r.hneg:
            if val[d] == -1:
                return False
        for insts in r.glits:
            if _glit_status(insts, val) == -1:
                return False
        return True

    def _support(self, x: int) -> None:
        v = self.val[x]
        if v == -1:
            return
        alive = None
        count = 0
        for ri in self.p.heads[x]:
            r = self.p.rules[ri]
            if self._possible(r):
                count += 1
                alive = r
                if count > 1:
                    return
        if count == 0:
            if v == 1:
                raise _Conflict
            self.assign(x, -1)
        elif v == 1:
            r = alive
            for b in r.bpos:
                self.assign(b, 1)
            for c in r.bneg:
                self.assign(c, -1)
            for d in r.hneg:
                self.assign(d, 1)
            val = self.val
            for insts in r.glits:
                for ante, cons in insts:
                    a = _ev(ante, val)
                    if a == 1:
                        if cons < 0:
                            raise _Conflict
                        self.assign(cons, 1)
                    elif a == 0 and (cons < 0 or val[cons] == -1) and type(ante) is int:
                        self.assign(ante, -1)

    def _local(self) -> None:
        p = self.p
        rules = p.rules
        queue = self.queue
        while queue:
            x = queue.pop()
            touched = set()
            for ri in p.occ[x]:
                r = rules[ri]
                self._clause(r)
                if r.head >= 0:
                    touched.add(r.head)
            for ri in p.heads[x]:
                self._clause(rules[ri])
            touched.add(x)
            for h in touched:
                self._support(h)

    def _unfounded(self) -> bool:
        """Falsify atoms outside the optimistic least model; True if anything changed."""
        p = self.p
        val = self.val
        n = len(p.atoms)
        reach = [False] * n
        waiting: dict[int, list] = {}
        stack = []
        for r in p.rules:
            if r.head < 0 or val[r.head] == -1 or not self._possible(r):
                continue
            body = set(r.bpos)
            blocked = False
            for insts in r.glits:
                for ante, cons in insts:
                    if _ev(ante, val) == 1:
                        if cons < 0:
                            blocked = True
                            break
                        body.add(cons)
                if blocked:
                    break
            if blocked:
                continue
            if not body:
                if not reach[r.head]:
                    reach[r.head] = True
                    stack.append(r.head)
                continue
            entry = [len(body), r.head]
            for b in body:
                waiting.setdefault(b, []).append(entry)
        while stack:
            x = stack.pop()
            for entry in waiting.get(x, ()):
                entry[0] -= 1
                if entry[0] == 0 and not reach[entry[1]]:
                    reach[entry[1]] = True
                    stack.append(entry[1])
        changed = False
        for i in range(n):
            if not reach[i]:
                if val[i] == 1:
                    raise _Conflict
                if val[i] == 0:
                    self.assign(i, -1)
                    changed = True
        return changed

    def propagate(self) -> bool:
        try:
            while True:
                self._local()
                if not self._unfounded():
                    return True
        except _Conflict:
            return False

    # search -----------------------------------------------------------

    def solutions(self) -> Iterator[frozenset[int]]:
        try:
            for x in self.initial_false:
                self.assign(x, -1)
            for ri in range(len(self.p.rules)):
                self._clause(self.p.rules[ri])
        except _Conflict:
            return
        # seed the queue with everything so support checks run once
        self.queue.extend(range(len(self.p.atoms)))
        if not self.propagate():
            return
        yield from self._dfs()

    def _pick(self) -> int:
        val = self.val
        for x in self.order:
            if val[x] == 0:
                return x
        return -1

    def _dfs(self) -> Iterator[frozenset[int]]:
        x = self._pick()
        if x < 0:
            yield frozenset(i for i, v in enumerate(self.val) if v == 1)
            return
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceError(f"search exceeded {self.max_nodes} nodes")
        for value in (1, -1):
            mark = len(self.trail)
            try:
                self.assign(x, value)
                ok = self.propagate()
            except _Conflict:
                ok = False
            if ok:
                yield from self._dfs()
            self.undo(mark)


# Public API ------------------------------------------------------------------

GOAL = Atom("#goal")


def _certify(grounded: GroundProgram, interp: OpenInterpretation) -> None:
    reduced = semantics.geli_reduct(grounded, interp)
    if not semantics.is_answer_set(reduced, interp.atoms):
        raise AssertionError(f"solver produced a non-answer set {interp}")
    depths = semantics.derivation_depths(semantics.gl_reduct(reduced, interp.atoms))
    if any(d > len(interp.atoms) for d in depths.values()):
        raise AssertionError("derivation depth exceeds the size of the answer set")


def _isolated_free_atoms(prog: CompiledProgram) -> list[int]:
    out = []
    for x in range(len(prog.atoms)):
        hs = prog.heads[x]
        if len(hs) == 1 and prog.rules[hs[0]].free and prog.occ[x] == hs:
            out.append(x)
    return out


def _solve(grounded: GroundProgram, budget: Budget, goals: Iterable[Atom] | None = None):
    rules = list(grounded.rules)
    if goals is not None:
        goals = list(goals)
        rules += [Rule((pos(GOAL),), (pos(g),)) for g in goals]
        rules.append(Rule((), (naf(GOAL),)))
    prog = CompiledProgram(GroundProgram(tuple(rules), grounded.universe), budget.max_atoms)
    fixed = _isolated_free_atoms(prog) if goals is not None else ()
    search = _Search(prog, budget.max_nodes, fixed)
    for sol in search.solutions():
        atoms = frozenset(prog.atoms[i] for i in sol) - {GOAL}
        interp = OpenInterpretation(grounded.universe, atoms)
        _certify(grounded, interp)
        yield interp


def _anonymous(program: Program, universe: Universe) -> list[str]:
    names = {t.name for t in program_signature(program).constants}
    return [e for e in universe if e not in names]


def _canonical_key(atoms: frozenset[Atom]) -> tuple:
    return tuple(sorted(str(a) for a in atoms))


def _rename(atoms: frozenset[Atom], mapping: dict[str, str]) -> frozenset[Atom]:
    return frozenset(Atom(a.pred, tuple(Term(mapping.get(t.name, t.name)) for t in a.args)) for a in atoms)


def enumerate_open_answer_sets(
    program: Program,
    universe: Universe | Iterable[str],
    budget: Budget | None = None,
    up_to_iso: bool = False,
) -> list[OpenInterpretation]:
    """All open answer sets with the given universe, in canonical order."""
    universe = as_universe(universe)
    budget = budget or Budget.default()
    grounded = ground(program, universe)
    found = list(_solve(grounded, budget))
    if up_to_iso:
        anon = _anonymous(program, universe)
        kept = []
        for interp in found:
            key = _canonical_key(interp.atoms)
            best = min(
                _canonical_key(_rename(interp.atoms, dict(zip(anon, perm))))
                for perm in itertools.permutations(anon)
            )
            if key == best:
                kept.append(interp)
        found = kept
    return sorted(found, key=lambda m: (len(m.atoms), _canonical_key(m.atoms)))


def find_open_answer_set(
    program: Program,
    universe: Universe | Iterable[str],
    goals: Iterable[Atom],
    budget: Budget | None = None,
) -> OpenInterpretation | None:
    """Some open answer set containing at least one goal atom."""
    universe = as_universe(universe)
    grounded = ground(program, universe)
    for interp in _solve(grounded, budget or Budget.default(), goals):
        return interp
    return None


def classical_answer_sets(program: Program, budget: Budget | None = None) -> list[OpenInterpretation]:
    consts = sorted(t.name for t in program_signature(program).constants)
    if not consts:
        raise UniverseError("a program without constants has an empty Herbrand universe")
    return enumerate_open_answer_sets(program, consts, budget)


def free_predicates(program: Program) -> set[str]:
    return {r.head_pos.pred for r in program.rules if r.is_free()}


def canonical_goal_atoms(pred: str, arity: int, constants: list[str], fresh: list[str]) -> list[Atom]:
    """Atoms over ``pred`` whose fresh elements appear in first-use order."""
    out = []
    pool = constants + fresh
    for combo in itertools.product(pool, repeat=arity):
        used = [e for e in dict.fromkeys(combo) if e in fresh]
        if used == fresh[: len(used)]:
            out.append(Atom(pred, tuple(Term(e) for e in combo)))
    return out


def satisfiable_up_to(
    program: Program,
    pred: str,
    k_max: int,
    budget: Budget | None = None,
) -> SatResult:
    """Look for an open answer set with a ``pred`` atom over cts(P) plus 0..k_max fresh elements."""
    budget = budget or Budget.default()
    sig = program_signature(program)
    if pred not in sig.predicates:
        return SatResult(UNSAT_UP_TO_BOUND, None, k_max, f"{pred} does not occur")
    arity = sig.predicates[pred]
    query_pred = pred
    searched = program
    if pred in free_predicates(program):
        query_pred = "#" + pred + "_q"
        xs = tuple(Term(f"X{i}", True) for i in range(1, arity + 1))
        extra = Rule((pos(Atom(query_pred, xs)),), (pos(Atom(pred, xs)),), (), "#query")
        searched = Program(program.rules + (extra,))
    constants = sorted(t.name for t in sig.constants)
    last = -1
    for k in range(k_max + 1):
        fresh = fresh_elements(k, set(constants) | set(sig.predicates))
        if not constants and not fresh:
            last = k
            continue
        universe = Universe(tuple(constants + fresh))
        goals = canonical_goal_atoms(query_pred, arity, constants, fresh)
        try:
            grounded = ground(searched, universe)
            witness = next(iter(_solve(grounded, budget, goals)), None)
        except ResourceError as exc:
            return SatResult(UNKNOWN, None, max(last, 0), str(exc))
        if witness is not None:
            atoms = frozenset(a for a in witness.atoms if a.pred != query_pred or query_pred == pred)
            interp = OpenInterpretation(universe, atoms)
            if not semantics.is_open_answer_set(program, interp):
                raise AssertionError("witness failed certification")
            return SatResult(SAT, interp, k)
        last = k
    return SatResult(UNSAT_UP_TO_BOUND, None, k_max)
