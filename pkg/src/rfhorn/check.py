"""Independent solution checking and the exact least-solution oracle.

Only core, lra and qelim are used here, never the resolution or extraction
machinery, so the oracle can serve as a differential test of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import (
    ClauseSystem,
    DNFFormula,
    FALSE,
    PredicateSymbol,
    Solution,
    formals,
    substitute,
)
from .errors import InputError
from .graph import analyze
from .lra import Invalid, Model, check_valid
from .qelim import DEFAULT_MAX_CONSTRAINTS, eliminate


@dataclass(frozen=True)
class Verified:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FailedClause:
    clause_id: int
    model: Model

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class FailedWf:
    """The solution for a wf-constrained predicate has no linear ranking witness."""

    predicate: PredicateSymbol

    def __bool__(self) -> bool:
        return False


CheckResult = Union[Verified, FailedClause, FailedWf]


def check_clauses(system: ClauseSystem, sol: Solution, clauses=None) -> CheckResult:
    for p in system.predicates:
        if p not in sol:
            raise InputError(f"solution has no entry for {p}")
    for clause in system.clauses if clauses is None else clauses:
        impl = substitute(sol, clause)
        for body in impl.body.disjuncts:
            result = check_valid(body, impl.head)
            if isinstance(result, Invalid):
                return FailedClause(clause.id, result.model)
    return Verified()


def check_solution(system: ClauseSystem, sol: Solution) -> CheckResult:
    """Every clause becomes a valid implication and every wf predicate is ranked."""
    from .wf import NoLinearRanking, synthesize_ranking

    result = check_clauses(system, sol)
    if not result:
        return result
    for cond in system.wf_conditions:
        witness = synthesize_ranking(sol[cond.predicate], cond.half)
        if isinstance(witness, NoLinearRanking):
            return FailedWf(cond.predicate)
    return Verified()


def least_solution(
    system: ClauseSystem, max_constraints: int = DEFAULT_MAX_CONSTRAINTS
) -> Solution:
    """Pointwise-least interpretation satisfying every non-query clause."""
    if system.wf_conditions:
        raise InputError("least_solution does not accept wf conditions")
    info = analyze(system)
    assignment: dict[PredicateSymbol, DNFFormula] = {}
    for p in info.topo_order:
        result = FALSE
        for clause in system.head_clauses(p):
            body = DNFFormula.of([clause.body_constraint])
            for a in clause.body_atoms:
                body = body & Solution(assignment).instantiate(a)
                if body.is_false:
                    break
            head_args = clause.head.args
            projected = eliminate(body, body.variables() - set(head_args), max_constraints)
            result = result | projected.rename(dict(zip(head_args, formals(p.arity))))
        assignment[p] = result
    return Solution(assignment)


@dataclass(frozen=True)
class OracleVerdict:
    solvable: bool
    solution: Solution
    failure: Optional[FailedClause]


def oracle(system: ClauseSystem, max_constraints: int = DEFAULT_MAX_CONSTRAINTS) -> OracleVerdict:
    """Solvable iff the least solution also satisfies every query clause."""
    sol = least_solution(system, max_constraints)
    result = check_clauses(system, sol, system.query_clauses)
    return OracleVerdict(bool(result), sol, None if result else result)
