"""Solutions from Farkas certificates and derivation provenance.

For a refuted ground implication, the weighted sum of the constraints that
originate in one derivation subtree mentions only the head arguments of the
subtree root: every other variable of the subtree is local to it and cancels
in the total sum.  That partial sum is the node's interpolant.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Atom,
    ClauseSystem,
    Conjunction,
    Constraint,
    DNFFormula,
    LinearTerm,
    Rel,
    Solution,
    TRUE,
    TRUE_CONJ,
    formals,
    normalize_constraint,
)
from .lra import ProvedBranch, Valid
from .unfold import DerivationNode, DerivationTree, GroundImplication


@dataclass(frozen=True)
class NodeInterpolant:
    node: DerivationNode
    formula: Conjunction


@dataclass(frozen=True)
class ProvedDerivation:
    tree: DerivationTree
    implication: GroundImplication
    proof: Valid


class _Sum:
    __slots__ = ("term", "all_eq", "strict", "used")

    def __init__(self):
        self.term = LinearTerm()
        self.all_eq = True
        self.strict = False
        self.used = False

    def add(self, c: Constraint, w: Fraction) -> None:
        self.term = self.term + c.term.scale(w)
        self.used = True
        if c.rel is not Rel.EQ:
            self.all_eq = False
        if c.rel is Rel.GT and w > 0:
            self.strict = True

    def formula(self) -> Conjunction:
        if not self.used:
            return TRUE_CONJ
        rel = Rel.EQ if self.all_eq else Rel.GT if self.strict else Rel.GE
        return Conjunction.of([normalize_constraint(Constraint(self.term, rel))])


def node_interpolants(
    tree: DerivationTree, implication: GroundImplication, branch: ProvedBranch
) -> list[NodeInterpolant]:
    """Interpolant of every non-root node for one refuted branch."""
    sums: dict[tuple, _Sum] = defaultdict(_Sum)
    for i, tagged in enumerate(implication.body):
        w = branch.certificate.weight(i)
        if not w:
            continue
        path = tagged.path
        for k in range(1, len(path) + 1):
            sums[path[:k]].add(tagged.constraint, w)
    out = []
    for node in tree.nodes():
        if not node.path:
            continue
        formula = sums[node.path].formula() if node.path in sums else TRUE_CONJ
        assert formula.variables() <= set(node.head.args), "interpolant leaks local variables"
        out.append(NodeInterpolant(node, formula))
    return out


def extract_solution(system: ClauseSystem, proved: Iterable[ProvedDerivation]) -> Solution:
    """Conjoin, per predicate, the interpolants of all its occurrences."""
    pieces: dict = defaultdict(list)
    for pd in proved:
        for branch in pd.proof.branches:
            for ni in node_interpolants(pd.tree, pd.implication, branch):
                head = ni.node.head
                assert isinstance(head, Atom)
                to_formal = dict(zip(head.args, formals(head.predicate.arity)))
                pieces[head.predicate].extend(ni.formula.rename(to_formal))
    assignment = {}
    for p in system.predicates:
        if p in pieces:
            assignment[p] = DNFFormula.of([Conjunction.of(pieces[p])])
        else:
            assignment[p] = TRUE
    return Solution(assignment)
