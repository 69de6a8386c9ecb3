"""Predicate dependency analysis: recursion check, topological order, tree vs DAG."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .core import Atom, ClauseSystem, PredicateSymbol
from .errors import RecursiveSystemError


class Shape(enum.Enum):
    TREE = "tree"
    DAG = "dag"


@dataclass(frozen=True)
class DependencyInfo:
    # q -> {p : p occurs in the body of a clause with head q}
    edges: Mapping[PredicateSymbol, frozenset[PredicateSymbol]]
    topo_order: tuple[PredicateSymbol, ...]
    shape: Shape
    query_clauses: tuple[int, ...]


def dependency_edges(system: ClauseSystem) -> dict[PredicateSymbol, set[PredicateSymbol]]:
    edges: dict[PredicateSymbol, set[PredicateSymbol]] = {p: set() for p in system.predicates}
    for cl in system.clauses:
        if isinstance(cl.head, Atom):
            edges[cl.head.predicate].update(a.predicate for a in cl.body_atoms)
    return edges


def find_cycle(system: ClauseSystem):
    """Some dependency cycle as a list of predicates, or None."""
    edges = dependency_edges(system)
    white, grey, black = 0, 1, 2
    color = {p: white for p in system.predicates}
    stack: list[PredicateSymbol] = []

    def visit(p):
        color[p] = grey
        stack.append(p)
        for q in sorted(edges[p], key=system.predicates.index):
            if color[q] == grey:
                return stack[stack.index(q):]
            if color[q] == white:
                found = visit(q)
                if found:
                    return found
        stack.pop()
        color[p] = black
        return None

    for p in system.predicates:
        if color[p] == white:
            found = visit(p)
            if found:
                return found
    return None


def analyze(system: ClauseSystem) -> DependencyInfo:
    cycle = find_cycle(system)
    if cycle:
        raise RecursiveSystemError(cycle)
    edges = dependency_edges(system)
    order: list[PredicateSymbol] = []
    done: set[PredicateSymbol] = set()
    remaining = list(system.predicates)
    while remaining:
        for p in remaining:
            if edges[p] <= done:
                order.append(p)
                done.add(p)
                remaining.remove(p)
                break

    heads = Counter(cl.head.predicate for cl in system.clauses if isinstance(cl.head, Atom))
    uses = Counter(a.predicate for cl in system.clauses for a in cl.body_atoms)
    tree = all(heads[p] <= 1 and uses[p] <= 1 for p in system.predicates)
    return DependencyInfo(
        edges={p: frozenset(qs) for p, qs in edges.items()},
        topo_order=tuple(order),
        shape=Shape.TREE if tree else Shape.DAG,
        query_clauses=tuple(cl.id for cl in system.clauses if cl.is_query),
    )


def derivable_predicates(system: ClauseSystem) -> frozenset[PredicateSymbol]:
    """Predicates with at least one finite derivation; the rest are empty in every least model."""
    alive: set[PredicateSymbol] = set()
    changed = True
    while changed:
        changed = False
        for cl in system.clauses:
            if isinstance(cl.head, Atom) and cl.head.predicate not in alive:
                if all(a.predicate in alive for a in cl.body_atoms):
                    alive.add(cl.head.predicate)
                    changed = True
    return frozenset(alive)


def prune_underivable(system: ClauseSystem) -> tuple[ClauseSystem, frozenset[PredicateSymbol]]:
    """Drop clauses whose body mentions a predicate that can never hold."""
    alive = derivable_predicates(system)
    dead = frozenset(p for p in system.predicates if p not in alive)
    if not dead:
        return system, dead
    kept = tuple(
        cl for cl in system.clauses if not any(a.predicate in dead for a in cl.body_atoms)
    )
    return ClauseSystem(system.predicates, kept, system.wf_conditions), dead
