"""Exception hierarchy shared by every module."""

from __future__ import annotations


class OaspError(Exception):
    """Base class for all errors raised by the package."""


class SourceSpan:
    __slots__ = ("line", "column", "offset", "end")

    def __init__(self, line: int, column: int, offset: int, end: int):
        self.line = line
        self.column = column
        self.offset = offset
        self.end = end

    def __repr__(self) -> str:
        return f"SourceSpan(line={self.line}, column={self.column})"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(OaspError):
    def __init__(self, message: str, span: SourceSpan | None = None):
        self.message = message
        self.span = span
        where = f" at {span}" if span is not None else ""
        super().__init__(f"{message}{where}")


class ArityError(OaspError):
    """A predicate is used with two different arities."""


class ProgramError(OaspError):
    """A structural invariant of a rule or program is violated."""


class UniverseError(OaspError):
    """The universe is empty or misses a program constant."""


class UnboundVariableError(OaspError):
    """A variable was left uninstantiated where a ground object is required."""


class UnsupportedError(OaspError):
    """The input lies outside the class an operation is defined for."""


class NotStratifiedError(UnsupportedError):
    pass


class ResourceError(OaspError):
    """A search or grounding budget was exceeded."""
