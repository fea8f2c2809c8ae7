"""Open answer set programming: parsing, grounding, bounded solving, guardedness
analysis, fixed-point completions, stratified Datalog and a CTL encoding."""

from .errors import (
    ArityError,
    NotStratifiedError,
    OaspError,
    ParseError,
    ProgramError,
    ResourceError,
    UnboundVariableError,
    UniverseError,
    UnsupportedError,
)
from .grounder import GroundProgram, ground
from .model import (
    Atom,
    GeneralizedLiteral,
    Literal,
    OpenInterpretation,
    Program,
    Rule,
    Term,
    Universe,
)
from .parser import parse_atoms, parse_ctl, parse_program, render_program
from .semantics import is_open_answer_set
from .solver import (
    SAT,
    UNKNOWN,
    UNSAT_UP_TO_BOUND,
    Budget,
    SatResult,
    enumerate_open_answer_sets,
    find_open_answer_set,
    satisfiable_up_to,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Atom",
    "Budget",
    "GeneralizedLiteral",
    "GroundProgram",
    "Literal",
    "NotStratifiedError",
    "OaspError",
    "OpenInterpretation",
    "ParseError",
    "Program",
    "ProgramError",
    "ResourceError",
    "Rule",
    "SAT",
    "SatResult",
    "Term",
    "UNKNOWN",
    "UNSAT_UP_TO_BOUND",
    "UnboundVariableError",
    "Universe",
    "UniverseError",
    "UnsupportedError",
    "enumerate_open_answer_sets",
    "find_open_answer_set",
    "ground",
    "is_open_answer_set",
    "parse_atoms",
    "parse_ctl",
    "parse_program",
    "render_program",
    "satisfiable_up_to",
]
