"""Existential quantifier elimination by Fourier-Motzkin."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    Constraint,
    Conjunction,
    DNFFormula,
    LinearTerm,
    Rel,
    Variable,
    normalize_constraint,
)
from .errors import ResourceLimitError
from . import lra

DEFAULT_MAX_CONSTRAINTS = 50_000


def _tighten(constraints: list[Constraint]) -> Optional[list[Constraint]]:
    """Keep the tightest inequality per linear part; None when trivially false."""
    best: dict[tuple, Constraint] = {}
    rest: list[Constraint] = []
    for c in constraints:
        c = normalize_constraint(c)
        if c.is_trivially_true():
            continue
        if c.is_trivially_false():
            return None
        if c.rel is Rel.EQ:
            rest.append(c)
            continue
        key = c.term.coeffs
        old = best.get(key)
        if old is None:
            best[key] = c
            continue
        # smaller constant is tighter; on a tie the strict one wins
        if (c.term.constant, c.rel is not Rel.GT) < (old.term.constant, old.rel is not Rel.GT):
            best[key] = c
    out = list(dict.fromkeys(rest + list(best.values())))
    out.sort(key=Constraint.sort_key)
    return out


def remove_redundant(constraints: list[Constraint]) -> list[Constraint]:
    """Drop every constraint entailed by the ones kept so far plus the unvisited rest."""
    kept = list(constraints)
    i = 0
    while i < len(kept):
        c = kept[i]
        others = kept[:i] + kept[i + 1:]
        if lra.is_valid(others, DNFFormula.conj([c])):
            kept = others
        else:
            i += 1
    return kept


def _substitute_equality(constraints: list[Constraint], eq_index: int, v: Variable) -> list[Constraint]:
    eqc = constraints[eq_index]
    a = eqc.term.coeff(v)
    # v = -(term - a v) / a
    rest = eqc.term - LinearTerm.var(v, a)
    replacement = rest.scale(Fraction(-1) / a)
    out = []
    for j, c in enumerate(constraints):
        if j == eq_index:
            continue
        out.append(c.substitute({v: replacement}))
    return out


def _combine(lower: Constraint, upper: Constraint, v: Variable) -> Constraint:
    a = lower.term.coeff(v)
    b = -upper.term.coeff(v)
    term = lower.term.scale(b) + upper.term.scale(a)
    rel = Rel.GT if Rel.GT in (lower.rel, upper.rel) else Rel.GE
    return normalize_constraint(Constraint(term, rel))


def eliminate_conjunction(
    conj: Iterable[Constraint],
    variables: Iterable[Variable],
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
    prune: bool = True,
) -> Optional[Conjunction]:
    """Project one conjunction; None when it is unsatisfiable."""
    cons = list(conj)
    if not lra.is_satisfiable(cons):
        return None
    targets = set(variables)
    cons = _tighten(cons)
    if cons is None:
        return None

    while True:
        present = targets & {v for c in cons for v in c.variables()}
        if not present:
            break
        pick = None
        for i, c in enumerate(cons):
            if c.rel is Rel.EQ:
                vs = sorted(present & c.variables(), key=lambda v: v.index)
                if vs:
                    pick = (i, vs[0])
                    break
        if pick is not None:
            cons = _tighten(_substitute_equality(cons, *pick))
            if cons is None:
                return None
            continue

        def cost(v):
            lo = sum(1 for c in cons if c.term.coeff(v) > 0)
            hi = sum(1 for c in cons if c.term.coeff(v) < 0)
            return (lo * hi, v.index)

        v = min(present, key=cost)
        lowers = [c for c in cons if c.term.coeff(v) > 0]
        uppers = [c for c in cons if c.term.coeff(v) < 0]
        others = [c for c in cons if not c.term.coeff(v)]
        if len(others) + len(lowers) * len(uppers) > max_constraints:
            raise ResourceLimitError(
                f"Fourier-Motzkin step exceeds {max_constraints} constraints"
            )
        combined = [_combine(lo, up, v) for lo in lowers for up in uppers]
        cons = _tighten(others + combined)
        if cons is None:
            return None
        if prune:
            cons = remove_redundant(cons)
    if prune:
        cons = remove_redundant(cons)
    return Conjunction.of(cons)


def eliminate(
    f: DNFFormula,
    variables: Iterable[Variable],
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> DNFFormula:
    """An equivalent of ``exists variables. f`` free of those variables."""
    variables = frozenset(variables)
    out = []
    for d in f.disjuncts:
        if not variables & d.variables():
            if lra.is_satisfiable(d):
                out.append(d)
            continue
        projected = eliminate_conjunction(d, variables, max_constraints)
        if projected is not None:
            out.append(projected)
    return DNFFormula.of(out)


def project_onto(f: DNFFormula, keep: Iterable[Variable], max_constraints: int = DEFAULT_MAX_CONSTRAINTS) -> DNFFormula:
    keep = frozenset(keep)
    return eliminate(f, f.variables() - keep, max_constraints)


def infimum(objective: LinearTerm, conj: Iterable[Constraint]) -> Optional[Fraction]:
    """Greatest lower bound of ``objective`` over a satisfiable conjunction; None if unbounded.

    Computed by projecting ``conj & y = objective`` onto a fresh ``y``.
    """
    y = Variable.fresh("_y")
    cons = list(conj) + [normalize_constraint(Constraint(LinearTerm.var(y) - objective, Rel.EQ))]
    projected = eliminate_conjunction(cons, {v for c in cons for v in c.variables()} - {y}, prune=False)
    if projected is None:
        raise ValueError("infimum over an unsatisfiable conjunction")
    best = None
    for c in projected:
        a = c.term.coeff(y)
        if a > 0 or c.rel is Rel.EQ:
            bound = -c.term.constant / a
            if best is None or bound > best:
                best = bound
    return best
