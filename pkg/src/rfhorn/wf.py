"""Replacing well-foundedness conditions by linear ranking bounds.

For a wf-constrained relation ``r(pre, post)`` the derivations of ``r`` are
projected onto its arguments, a single linear ranking function ``f`` is
synthesized for their union, and ``wf(r)`` is replaced by the clause

    r(pre, post) -> f(pre) >= b0 & f(pre) - f(post) >= delta

which bounds ``r`` by a relation that admits no infinite chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .core import (
    Atom,
    ClauseSystem,
    Conjunction,
    Constraint,
    DNFFormula,
    FALSE,
    HornClause,
    LinearTerm,
    Rel,
    TRUE_CONJ,
    Variable,
    formals,
    integer_scale,
    normalize_constraint,
)
from .graph import prune_underivable
from .lra import Sat, check_sat, is_satisfiable, is_valid
from .qelim import eliminate, infimum
from .unfold import DEFAULT_MAX_DERIVATIONS, GroundImplication, unfold_clause

ZERO = Fraction(0)


@dataclass(frozen=True)
class RankingWitness:
    """``f(pre) >= bound`` and ``f(pre) - f(post) >= decrease`` with ``decrease > 0``."""

    coefficients: Mapping[Variable, Fraction]
    bound: Fraction
    decrease: Fraction

    def function(self, pre: Sequence[Variable]) -> LinearTerm:
        params = formals(len(pre))
        return LinearTerm.of({p: self.coefficients.get(f, ZERO) for f, p in zip(params, pre)})

    def relation(self, pre: Sequence[Variable], post: Sequence[Variable]) -> DNFFormula:
        f_pre = self.function(pre)
        f_post = self.function(post)
        return DNFFormula.conj([
            normalize_constraint(Constraint(f_pre - self.bound, Rel.GE)),
            normalize_constraint(Constraint(f_pre - f_post - self.decrease, Rel.GE)),
        ])

    def formal_relation(self, half: int) -> DNFFormula:
        params = formals(2 * half)
        return self.relation(params[:half], params[half:])


@dataclass(frozen=True)
class NoLinearRanking:
    reason: str


@dataclass(frozen=True)
class Unknown:
    reason: str


def project_underapprox(impl: GroundImplication) -> DNFFormula:
    """Project the body onto the head atom's arguments, renamed to formal parameters."""
    head = impl.head
    assert isinstance(head, Atom)
    body = DNFFormula.conj(impl.constraints)
    projected = eliminate(body, body.variables() - set(head.args))
    return projected.rename(dict(zip(head.args, formals(head.predicate.arity))))


def _entailment_rows(
    disjunct: Conjunction, target: Mapping, variables: Sequence[Variable], tag: str
) -> list[Constraint]:
    """Farkas encoding of ``disjunct -> target >= 0``.

    ``target`` maps each variable (and ``None`` for the constant) to its
    coefficient, itself a term over the unknowns being synthesized.
    """
    rows: list[Constraint] = []
    lambdas = []
    for k, c in enumerate(disjunct):
        lam = Variable.fresh(f"_l{tag}{k}")
        lambdas.append((lam, c))
        if c.rel is not Rel.EQ:
            rows.append(Constraint(LinearTerm.var(lam), Rel.GE))
    slack = Variable.fresh(f"_l{tag}c")
    rows.append(Constraint(LinearTerm.var(slack), Rel.GE))
    for v in variables:
        lhs = LinearTerm.of({lam: c.term.coeff(v) for lam, c in lambdas})
        rows.append(normalize_constraint(Constraint(lhs - target[v], Rel.EQ)))
    lhs = LinearTerm.of({lam: c.term.constant for lam, c in lambdas}) + LinearTerm.var(slack)
    rows.append(normalize_constraint(Constraint(lhs - target[None], Rel.EQ)))
    return rows


def synthesize_ranking(rel: DNFFormula, half: int = None) -> Union[RankingWitness, NoLinearRanking]:
    """One linear ranking function for every disjunct of ``rel`` over ``X1..X2n``."""
    if half is None:
        top = max((v.index for v in rel.variables()), default=-1) + 1
        half = (top + 1) // 2
    params = formals(2 * half)
    pre, post = params[:half], params[half:]
    disjuncts = [d for d in rel.disjuncts if is_satisfiable(d)]
    if not disjuncts:
        return RankingWitness({p: ZERO for p in pre}, ZERO, Fraction(1))

    coeff = [Variable.fresh(f"_c{j}") for j in range(half)]
    b0 = Variable.fresh("_b0")
    variables = sorted(set(params) | {v for d in disjuncts for v in d.variables()},
                       key=lambda v: v.index)

    # target coefficient tables: variable -> term over the unknowns, None -> constant
    bounded = {v: LinearTerm() for v in variables}
    decreasing = {v: LinearTerm() for v in variables}
    for j in range(half):
        bounded[pre[j]] = LinearTerm.var(coeff[j])
        decreasing[pre[j]] = LinearTerm.var(coeff[j])
        decreasing[post[j]] = LinearTerm.var(coeff[j], -1)
    bounded[None] = LinearTerm.var(b0, -1)
    decreasing[None] = LinearTerm.const(-1)

    rows: list[Constraint] = []
    for i, d in enumerate(disjuncts):
        rows += _entailment_rows(d, bounded, variables, f"b{i}_")
        rows += _entailment_rows(d, decreasing, variables, f"d{i}_")
    result = check_sat(rows)
    if not isinstance(result, Sat):
        return NoLinearRanking("no single linear ranking function exists for the relation")

    model = result.model.assignment
    f = integer_scale(LinearTerm.of({p: model.get(c, ZERO) for p, c in zip(pre, coeff)}))
    f_post = f.rename(dict(zip(pre, post)))
    step = min(infimum(f - f_post, d) for d in disjuncts)
    if step < 1:
        f = f.scale(1 / step)
        f_post = f.rename(dict(zip(pre, post)))
    bound = min(infimum(f, d) for d in disjuncts)
    witness = RankingWitness({p: f.coeff(p) for p in pre}, bound, Fraction(1))
    target = witness.formal_relation(half)
    assert all(is_valid(d, target) for d in disjuncts), "ranking witness does not cover relation"
    return witness


def replacement_clause(cond_predicate, witness: RankingWitness, clause_id: int) -> HornClause:
    n = cond_predicate.arity
    params = tuple(Variable.fresh(f"X{i + 1}") for i in range(n))
    head = witness.relation(params[: n // 2], params[n // 2:])
    return HornClause(clause_id, (Atom(cond_predicate, params),), TRUE_CONJ, head)


def wf_relation(
    system: ClauseSystem,
    predicate,
    max_derivations: int = DEFAULT_MAX_DERIVATIONS,
) -> DNFFormula:
    """Union of the projected derivations of ``predicate``."""
    pruned, dead = prune_underivable(system)
    if predicate in dead:
        return FALSE
    rel = FALSE
    for clause in pruned.head_clauses(predicate):
        for _, impl in unfold_clause(pruned, clause, max_derivations):
            rel = rel | project_underapprox(impl)
    return rel


def eliminate_wf(
    system: ClauseSystem, max_derivations: int = DEFAULT_MAX_DERIVATIONS
) -> Union[ClauseSystem, Unknown]:
    """The system with every wf condition replaced by a ranking upper bound."""
    if not system.wf_conditions:
        return system
    clauses = list(system.clauses)
    next_id = system.next_clause_id()
    for cond in system.wf_conditions:
        rel = wf_relation(system, cond.predicate, max_derivations)
        witness = synthesize_ranking(rel, cond.half)
        if isinstance(witness, NoLinearRanking):
            return Unknown(f"{cond.predicate}: {witness.reason}")
        clauses.append(replacement_clause(cond.predicate, witness, next_id))
        next_id += 1
    return ClauseSystem(system.predicates, tuple(clauses), ())
