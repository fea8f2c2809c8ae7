"""Membership in the (loosely) guarded fixed-point fragments."""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    ATOMIC,
    And,
    Eq,
    Exists,
    Fix,
    Forall,
    Formula,
    Implies,
    Rel,
    children,
    free_vars,
    is_positive_in,
    walk,
)


@dataclass(frozen=True)
class FormulaClass:
    fragment: str | None  # "GF", "LGF", "muGF", "muLGF" or None
    alternation_free: bool
    reason: str = ""

    def __str__(self) -> str:
        alt = "alternation-free" if self.alternation_free else "alternating"
        return f"{self.fragment or 'unguarded'} ({alt})"


def _guard_atoms(items) -> tuple[list, list]:
    guards = [f for f in items if isinstance(f, (Rel, Eq))]
    rest = [f for f in items if not isinstance(f, (Rel, Eq))]
    return guards, rest


def _atom_vars(f) -> frozenset:
    return free_vars(f)


class _Checker:
    def __init__(self, loose: bool):
        self.loose = loose
        self.reason = ""

    def fail(self, why: str) -> bool:
        if not self.reason:
            self.reason = why
        return False

    def check(self, f: Formula) -> bool:
        if isinstance(f, ATOMIC):
            return True
        if isinstance(f, (Forall, Exists)):
            return self.quantifier(f)
        if isinstance(f, Fix):
            if not is_positive_in(f.body, f.pvar):
                return self.fail(f"{f.pvar} occurs negatively")
            if not free_vars(f.body) <= frozenset(f.params):
                return self.fail(f"fixed-point body of {f.pvar} has extra free variables")
            return self.check(f.body)
        return all(self.check(c) for c in children(f))

    def quantifier(self, f) -> bool:
        bound = frozenset(f.variables)
        outer = free_vars(f)
        if isinstance(f, Exists):
            items = list(f.body.args) if isinstance(f.body, And) else [f.body]
            guards, rest = _guard_atoms(items)
        else:
            if not isinstance(f.body, Implies):
                return self.fail("universal quantifier without an implication")
            ante = f.body.left
            items = list(ante.args) if isinstance(ante, And) else [ante]
            guards, extra = _guard_atoms(items)
            if extra:
                return self.fail("universal guard is not a conjunction of atoms")
            rest = [f.body.right]
        if not guards:
            return self.fail("quantifier without a guard")
        needed = bound | outer
        covered = frozenset().union(*(_atom_vars(g) for g in guards))
        if not needed <= covered:
            return self.fail("guard misses free variables")
        if self.loose:
            for y in bound:
                for z in needed:
                    if not any({y, z} <= _atom_vars(g) for g in guards):
                        return self.fail(f"variables {y.name} and {z.name} never share a guard atom")
        elif not any(needed <= _atom_vars(g) for g in guards):
            return self.fail("no single guard atom covers the variables")
        return all(self.check(c) for c in rest)


def alternation_free(f: Formula) -> bool:
    fixes = [g for g in walk(f) if isinstance(g, Fix)]
    least = [g for g in fixes if g.kind == "lfp"]
    greatest = [g for g in fixes if g.kind == "gfp"]

    def mentions(body: Formula, name: str) -> bool:
        return any(g.__class__.__name__ == "PVar" and g.name == name for g in walk(body))

    def contains(outer: Formula, inner: Formula) -> bool:
        return any(g is inner for g in walk(outer))

    for lf in least:
        for gf in greatest:
            if mentions(gf.body, lf.pvar) and contains(lf.body, gf):
                return False
            if mentions(lf.body, gf.pvar) and contains(gf.body, lf):
                return False
    return True


def formula_class(formulas: Formula | list[Formula]) -> FormulaClass:
    """Strongest of GF, LGF (with mu- prefix when fixed points occur) for a formula set."""
    items = formulas if isinstance(formulas, list) else [formulas]
    has_fix = any(isinstance(g, Fix) for f in items for g in walk(f))
    alt = all(alternation_free(f) for f in items)
    prefix = "mu" if has_fix else ""
    guarded = _Checker(loose=False)
    if all(guarded.check(f) for f in items):
        return FormulaClass(prefix + "GF", alt)
    loose = _Checker(loose=True)
    if all(loose.check(f) for f in items):
        return FormulaClass(prefix + "LGF", alt)
    return FormulaClass(None, alt, loose.reason)


def in_fragment(formulas, fragment: str) -> bool:
    """Whether the formulas belong to ``fragment`` (GF is contained in LGF)."""
    got = formula_class(formulas).fragment
    if got is None:
        return False
    ok = {"GF": {"GF", "LGF"}, "LGF": {"LGF"}, "muGF": {"GF", "LGF", "muGF", "muLGF"}, "muLGF": {"LGF", "muLGF"}}
    return fragment in ok[got]
