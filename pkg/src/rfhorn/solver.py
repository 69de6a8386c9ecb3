"""End-to-end solving: wf elimination, resolution, proof, extraction, verification."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

from .check import check_solution, least_solution
from .core import FALSE, ClauseSystem, DNFFormula, Solution, evaluate
from .errors import HornError
from .extract import ProvedDerivation, extract_solution
from .graph import analyze, prune_underivable
from .lra import Invalid, Model, check_valid
from .qelim import DEFAULT_MAX_CONSTRAINTS
from .unfold import DEFAULT_MAX_DERIVATIONS, DerivationTree, GroundImplication, unfold
from .wf import Unknown, eliminate_wf

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    max_derivations: int = DEFAULT_MAX_DERIVATIONS
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS


@dataclass(frozen=True)
class Counterexample:
    derivation: DerivationTree
    implication: GroundImplication
    model: Model

    def is_genuine(self) -> bool:
        body = DNFFormula.conj(self.implication.constraints)
        return evaluate(body, self.model.assignment) and not evaluate(
            self.implication.head, self.model.assignment
        )


@dataclass(frozen=True)
class Solvable:
    solution: Solution
    # "interpolation" when extracted from proofs, "least" after the fallback
    method: str = "interpolation"


@dataclass(frozen=True)
class Unsolvable:
    counterexample: Counterexample


Verdict = Union[Solvable, Unsolvable, Unknown]


class InternalError(HornError):
    """A verification step rejected a result the pipeline produced."""


def solve(system: ClauseSystem, limits: Limits = Limits()) -> Verdict:
    analyze(system)
    work = system
    if system.wf_conditions:
        work = eliminate_wf(system, limits.max_derivations)
        if isinstance(work, Unknown):
            return work

    pruned, dead = prune_underivable(work)
    info = analyze(pruned)
    proved = []
    for tree, impl in unfold(pruned, info, limits.max_derivations):
        result = check_valid(impl.constraints, impl.head)
        if isinstance(result, Invalid):
            cex = Counterexample(tree, impl, result.model)
            if not cex.is_genuine():
                raise InternalError("countermodel does not falsify its ground implication")
            return Unsolvable(cex)
        proved.append(ProvedDerivation(tree, impl, result))

    sol = extract_solution(pruned, proved)
    sol = Solution({p: FALSE if p in dead else f for p, f in sol.assignment.items()})
    method = "interpolation"
    if not check_solution(work, sol):
        log.debug("extracted solution rejected; falling back to the least solution")
        sol = least_solution(work, limits.max_constraints)
        method = "least"
        if not check_solution(work, sol):
            raise InternalError("least solution fails although every derivation is valid")
    if work is not system and not check_solution(system, sol):
        raise InternalError("solution violates a well-foundedness condition")
    return Solvable(sol, method)
