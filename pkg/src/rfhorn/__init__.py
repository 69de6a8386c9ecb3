"""Recursion-free constrained Horn clauses over linear rational arithmetic."""

from .check import check_solution, least_solution, oracle
from .core import (
    Atom,
    ClauseSystem,
    Conjunction,
    Constraint,
    DNFFormula,
    HornClause,
    LinearTerm,
    PredicateSymbol,
    Rel,
    Solution,
    Variable,
    WfCondition,
)
from .errors import (
    EncodingError,
    HornError,
    InputError,
    ParseError,
    RecursiveSystemError,
    ResourceLimitError,
)
from .frontend import SourceFormat, parse_solution, parse_system, render_solution, render_system
from .solver import Limits, Solvable, Unsolvable, solve
from .wf import Unknown

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "ClauseSystem",
    "Conjunction",
    "Constraint",
    "DNFFormula",
    "EncodingError",
    "HornClause",
    "HornError",
    "InputError",
    "Limits",
    "LinearTerm",
    "ParseError",
    "PredicateSymbol",
    "RecursiveSystemError",
    "Rel",
    "ResourceLimitError",
    "Solution",
    "Solvable",
    "SourceFormat",
    "Unknown",
    "Unsolvable",
    "Variable",
    "WfCondition",
    "check_solution",
    "least_solution",
    "oracle",
    "parse_solution",
    "parse_system",
    "render_solution",
    "render_system",
    "solve",
]
