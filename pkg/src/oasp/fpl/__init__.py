"""Fixed-point logic: formulas, finite evaluation, completions, fragment checks."""

from .classify import FormulaClass, alternation_free, formula_class, in_fragment
from .completion import (
    Completion,
    build_comp,
    build_compg,
    build_gcomp,
    build_gcompg,
    completion_extension,
    sat_formula,
)
from .evaluate import FiniteStructure, all_structures, enumerate_models, evaluate
from .formula import eliminate_gfp, parse_formulas, render, render_all, width

__all__ = [
    "Completion",
    "FiniteStructure",
    "FormulaClass",
    "all_structures",
    "alternation_free",
    "build_comp",
    "build_compg",
    "build_gcomp",
    "build_gcompg",
    "completion_extension",
    "eliminate_gfp",
    "enumerate_models",
    "evaluate",
    "formula_class",
    "in_fragment",
    "parse_formulas",
    "render",
    "render_all",
    "sat_formula",
    "width",
]
