"""CTL formula trees and their text form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

UNARY_OPS = ("EX", "AX", "EF", "AF", "EG", "AG")


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Formula"

    def __post_init__(self) -> None:
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown temporal operator {self.op}")


@dataclass(frozen=True)
class Until:
    quant: str  # "E" or "A"
    left: "Formula"
    right: "Formula"

    def __post_init__(self) -> None:
        if self.quant not in ("E", "A"):
            raise ValueError(f"unknown path quantifier {self.quant}")


Formula = Union[Prop, Top, Not, And, Or, Implies, Iff, Unary, Until]

_BINARY = {And: ("&", 3), Or: ("|", 2), Implies: ("->", 1), Iff: ("<->", 0)}


def render_ctl(f: Formula, parent: int = -1) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Not):
        if isinstance(f.arg, Top):
            return "false"
        return "~" + render_ctl(f.arg, 4)
    if isinstance(f, Unary):
        return f"{f.op} " + render_ctl(f.arg, 4)
    if isinstance(f, Until):
        return f"{f.quant} ({render_ctl(f.left)} U {render_ctl(f.right)})"
    sym, level = _BINARY[type(f)]
    # And/Or are left-associative, the arrows right-associative
    if isinstance(f, (And, Or)):
        left, right = render_ctl(f.left, level - 1), render_ctl(f.right, level)
    else:
        left, right = render_ctl(f.left, level), render_ctl(f.right, level - 1)
    text = f"{left} {sym} {right}"
    return f"({text})" if parent >= level else text


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order walk; children before parents."""
    if isinstance(f, (Not, Unary)):
        yield from subformulas(f.arg)
    elif isinstance(f, (And, Or, Implies, Iff, Until)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    yield f


def propositions(f: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Prop):
            seen.setdefault(g.name)
    return list(seen)


def temporal_count(f: Formula) -> int:
    return sum(1 for g in subformulas(f) if isinstance(g, (Unary, Until)))
