"""Resolution of unknown predicates into ground implications with provenance."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

from .core import Atom, ClauseSystem, Constraint, DNFFormula, HornClause, Variable
from .errors import ResourceLimitError, UnresolvableAtom
from .graph import DependencyInfo, analyze

DEFAULT_MAX_DERIVATIONS = 10_000

Path = tuple[int, ...]


@dataclass(frozen=True)
class DerivationNode:
    """One clause instantiation; ``children[i]`` resolves body atom ``i``."""

    clause_id: int
    path: Path
    renaming: Mapping[Variable, Variable]
    head: Union[Atom, DNFFormula]
    body_atoms: tuple[Atom, ...]
    constraints: tuple[Constraint, ...]
    children: tuple["DerivationNode", ...]

    def walk(self) -> Iterator["DerivationNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class DerivationTree:
    root: DerivationNode

    @property
    def query_clause(self) -> int:
        return self.root.clause_id

    def nodes(self) -> Iterator[DerivationNode]:
        return self.root.walk()

    def __str__(self) -> str:
        def show(n):
            if not n.children:
                return str(n.clause_id)
            return f"{n.clause_id}({', '.join(show(c) for c in n.children)})"
        return show(self.root)


@dataclass(frozen=True)
class TaggedConstraint:
    constraint: Constraint
    clause_id: int
    path: Path


@dataclass(frozen=True)
class GroundImplication:
    body: tuple[TaggedConstraint, ...]
    head: Union[DNFFormula, Atom]

    @property
    def constraints(self) -> tuple[Constraint, ...]:
        return tuple(t.constraint for t in self.body)

    def __str__(self) -> str:
        body = " & ".join(str(t.constraint) for t in self.body) or "true"
        return f"{body} -> {self.head}"


def _path_name(path: Path) -> str:
    return "@" + ".".join(map(str, path))


class _Unfolder:
    def __init__(self, system: ClauseSystem, max_derivations: int):
        self.system = system
        self.max = max_derivations
        self.heads = {p: system.head_clauses(p) for p in system.predicates}

    def instances(self, clause: HornClause, path: Path, binding: Optional[Sequence[Variable]]):
        renaming: dict[Variable, Variable] = {}
        if binding is not None:
            renaming.update(zip(clause.head.args, binding))
        suffix = _path_name(path)
        for v in sorted(clause.variables(), key=lambda v: v.index):
            if v not in renaming:
                renaming[v] = Variable.fresh(f"{v.name}{suffix}")
        own = tuple(clause.body_constraint.rename(renaming))
        atoms = tuple(a.rename(renaming) for a in clause.body_atoms)
        head = clause.head.rename(renaming)

        options = []
        for i, atom in enumerate(atoms):
            defs = self.heads[atom.predicate]
            if not defs:
                raise UnresolvableAtom(atom.predicate)
            alts = []
            for d in defs:
                alts.extend(self.instances(d, path + (i,), atom.args))
                if len(alts) > self.max:
                    raise ResourceLimitError(f"more than {self.max} derivations")
            options.append(alts)

        out = []
        for combo in itertools.product(*options):
            children = tuple(node for node, _ in combo)
            tagged = tuple(t for _, ts in combo for t in ts)
            tagged += tuple(TaggedConstraint(c, clause.id, path) for c in own)
            node = DerivationNode(clause.id, path, renaming, head, atoms, own, children)
            out.append((node, tagged))
            if len(out) > self.max:
                raise ResourceLimitError(f"more than {self.max} derivations")
        return out


def unfold_clause(
    system: ClauseSystem, clause: HornClause, max_derivations: int = DEFAULT_MAX_DERIVATIONS
) -> list[tuple[DerivationTree, GroundImplication]]:
    """All complete derivations rooted at ``clause``."""
    out = []
    for node, tagged in _Unfolder(system, max_derivations).instances(clause, (), None):
        out.append((DerivationTree(node), GroundImplication(tagged, node.head)))
    return out


def unfold(
    system: ClauseSystem,
    info: Optional[DependencyInfo] = None,
    max_derivations: int = DEFAULT_MAX_DERIVATIONS,
) -> list[tuple[DerivationTree, GroundImplication]]:
    """Derivations of every query clause, in clause order."""
    if info is None:
        info = analyze(system)
    out = []
    for cid in info.query_clauses:
        out.extend(unfold_clause(system, system.clause(cid), max_derivations))
        if len(out) > max_derivations:
            raise ResourceLimitError(f"more than {max_derivations} derivations")
    return out
