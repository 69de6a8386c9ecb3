"""Exact linear rational arithmetic vocabulary: terms, constraints, formulas, clauses.

Every value here is immutable.  Constraints are kept in the canonical shape
``term REL 0`` with ``REL`` one of ``>=``, ``>`` or ``=``; see
:func:`normalize_constraint`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import InputError

Rational = Fraction

# Indices below FRESH_BASE are reserved for formal parameters X1, X2, ...
FRESH_BASE = 1 << 20
_fresh_counter = itertools.count(FRESH_BASE)


@dataclass(frozen=True)
class Variable:
    name: str = field(compare=False)
    index: int

    @classmethod
    def fresh(cls, name: str) -> "Variable":
        return cls(name, next(_fresh_counter))

    def __lt__(self, other: "Variable") -> bool:
        return self.index < other.index

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Variable({self.name!r}, {self.index})"

    def __add__(self, other):
        return LinearTerm.var(self) + as_term(other)

    __radd__ = __add__

    def __sub__(self, other):
        return LinearTerm.var(self) - as_term(other)

    def __rsub__(self, other):
        return as_term(other) - LinearTerm.var(self)

    def __neg__(self):
        return LinearTerm.var(self, -1)

    def __mul__(self, k):
        return LinearTerm.var(self, k)

    __rmul__ = __mul__


def formal(i: int) -> Variable:
    """The i-th (0-based) formal parameter of a predicate."""
    return Variable(f"X{i + 1}", i)


def formals(arity: int) -> tuple[Variable, ...]:
    return tuple(formal(i) for i in range(arity))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact arithmetic")
    return Fraction(x)


@dataclass(frozen=True)
class LinearTerm:
    """``sum(c * v) + constant``; coefficient pairs sorted by variable index, none zero."""

    coeffs: tuple[tuple[Variable, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    @classmethod
    def of(cls, coeffs: Mapping[Variable, object] = None, constant=0) -> "LinearTerm":
        items = []
        for v, c in (coeffs or {}).items():
            c = _frac(c)
            if c:
                items.append((v, c))
        items.sort(key=lambda vc: vc[0].index)
        return cls(tuple(items), _frac(constant))

    @classmethod
    def var(cls, v: Variable, coeff=1) -> "LinearTerm":
        return cls.of({v: coeff})

    @classmethod
    def const(cls, c) -> "LinearTerm":
        return cls((), _frac(c))

    def as_dict(self) -> dict[Variable, Fraction]:
        return dict(self.coeffs)

    def coeff(self, v: Variable) -> Fraction:
        for w, c in self.coeffs:
            if w == v:
                return c
        return Fraction(0)

    def variables(self) -> frozenset[Variable]:
        return frozenset(v for v, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def linear_part(self) -> "LinearTerm":
        return LinearTerm(self.coeffs, Fraction(0))

    def __add__(self, other: "TermLike") -> "LinearTerm":
        other = as_term(other)
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, 0) + c
        return LinearTerm.of(acc, self.constant + other.constant)

    def __neg__(self) -> "LinearTerm":
        return LinearTerm(tuple((v, -c) for v, c in self.coeffs), -self.constant)

    def __radd__(self, other: "TermLike") -> "LinearTerm":
        return self + other

    def __sub__(self, other: "TermLike") -> "LinearTerm":
        return self + (-as_term(other))

    def __rsub__(self, other: "TermLike") -> "LinearTerm":
        return as_term(other) - self

    def scale(self, k) -> "LinearTerm":
        k = _frac(k)
        if not k:
            return LinearTerm()
        return LinearTerm(tuple((v, c * k) for v, c in self.coeffs), self.constant * k)

    __mul__ = scale
    __rmul__ = scale

    def evaluate(self, point: Mapping[Variable, Fraction]) -> Fraction:
        total = self.constant
        for v, c in self.coeffs:
            if v not in point:
                raise InputError(f"variable {v.name} is not assigned")
            total += c * point[v]
        return total

    def substitute(self, mapping: Mapping[Variable, "LinearTerm"]) -> "LinearTerm":
        if not any(v in mapping for v, _ in self.coeffs):
            return self
        acc: dict[Variable, Fraction] = {}
        constant = self.constant
        for v, c in self.coeffs:
            if v in mapping:
                t = mapping[v]
                constant += c * t.constant
                for w, d in t.coeffs:
                    acc[w] = acc.get(w, 0) + c * d
            else:
                acc[v] = acc.get(v, 0) + c
        return LinearTerm.of(acc, constant)

    def rename(self, mapping: Mapping[Variable, Variable]) -> "LinearTerm":
        if not any(v in mapping for v, _ in self.coeffs):
            return self
        acc: dict[Variable, Fraction] = {}
        for v, c in self.coeffs:
            w = mapping.get(v, v)
            acc[w] = acc.get(w, 0) + c
        return LinearTerm.of(acc, self.constant)

    def __str__(self) -> str:
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(f"+ {v.name}")
            elif c == -1:
                parts.append(f"- {v.name}")
            elif c > 0:
                parts.append(f"+ {c}*{v.name}")
            else:
                parts.append(f"- {-c}*{v.name}")
        if self.constant or not parts:
            c = self.constant
            parts.append(f"+ {c}" if c >= 0 else f"- {-c}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


TermLike = Union[LinearTerm, Variable, int, Fraction]


def as_term(x: TermLike) -> LinearTerm:
    if isinstance(x, LinearTerm):
        return x
    if isinstance(x, Variable):
        return LinearTerm.var(x)
    return LinearTerm.const(x)


class Rel(enum.Enum):
    GE = ">="
    GT = ">"
    EQ = "="

    @property
    def order(self) -> int:
        return _REL_ORDER[self]


_REL_ORDER = {Rel.GE: 0, Rel.GT: 1, Rel.EQ: 2}


@dataclass(frozen=True)
class Constraint:
    """``term rel 0``."""

    term: LinearTerm
    rel: Rel

    def variables(self) -> frozenset[Variable]:
        return self.term.variables()

    @property
    def is_strict(self) -> bool:
        return self.rel is Rel.GT

    def holds(self, point: Mapping[Variable, Fraction]) -> bool:
        value = self.term.evaluate(point)
        if self.rel is Rel.GE:
            return value >= 0
        if self.rel is Rel.GT:
            return value > 0
        return value == 0

    def is_trivially_true(self) -> bool:
        return self.term.is_constant() and self.holds({})

    def is_trivially_false(self) -> bool:
        return self.term.is_constant() and not self.holds({})

    def rename(self, mapping: Mapping[Variable, Variable]) -> "Constraint":
        return normalize_constraint(Constraint(self.term.rename(mapping), self.rel))

    def substitute(self, mapping: Mapping[Variable, LinearTerm]) -> "Constraint":
        return normalize_constraint(Constraint(self.term.substitute(mapping), self.rel))

    def sort_key(self):
        lead = self.term.coeffs[0][0].index if self.term.coeffs else -1
        return (
            lead,
            self.rel.order,
            self.term.constant,
            tuple((v.index, c) for v, c in self.term.coeffs),
        )

    def __str__(self) -> str:
        return f"{self.term} {self.rel.value} 0"


def normalize_constraint(c: Constraint) -> Constraint:
    """Canonical form: leading coefficient of magnitude 1 (positive for equalities).

    Constant constraints are reduced to a constant of -1, 0 or 1.
    """
    term = c.term
    if not term.coeffs:
        k = term.constant
        sign = (k > 0) - (k < 0)
        if sign == 0 and c.rel is Rel.GT:
            return Constraint(LinearTerm.const(-1), Rel.GE)
        return Constraint(LinearTerm.const(sign), c.rel)
    lead = term.coeffs[0][1]
    factor = 1 / lead if c.rel is Rel.EQ else 1 / abs(lead)
    if factor == 1:
        return c
    return Constraint(term.scale(factor), c.rel)


def _rel(lhs: TermLike, rhs: TermLike, rel: Rel) -> Constraint:
    return normalize_constraint(Constraint(as_term(lhs) - as_term(rhs), rel))


def ge(lhs: TermLike, rhs: TermLike = 0) -> Constraint:
    return _rel(lhs, rhs, Rel.GE)


def gt(lhs: TermLike, rhs: TermLike = 0) -> Constraint:
    return _rel(lhs, rhs, Rel.GT)


def le(lhs: TermLike, rhs: TermLike = 0) -> Constraint:
    return _rel(rhs, lhs, Rel.GE)


def lt(lhs: TermLike, rhs: TermLike = 0) -> Constraint:
    return _rel(rhs, lhs, Rel.GT)


def eq(lhs: TermLike, rhs: TermLike = 0) -> Constraint:
    return _rel(lhs, rhs, Rel.EQ)


def negate_constraint(c: Constraint) -> tuple[Constraint, ...]:
    """The complement of ``c`` as a disjunction of constraints."""
    t = c.term
    if c.rel is Rel.GE:
        return (normalize_constraint(Constraint(-t, Rel.GT)),)
    if c.rel is Rel.GT:
        return (normalize_constraint(Constraint(-t, Rel.GE)),)
    return (
        normalize_constraint(Constraint(t, Rel.GT)),
        normalize_constraint(Constraint(-t, Rel.GT)),
    )


FALSE_CONSTRAINT = Constraint(LinearTerm.const(-1), Rel.GE)


@dataclass(frozen=True)
class Conjunction:
    constraints: tuple[Constraint, ...] = ()

    @classmethod
    def of(cls, constraints: Iterable[Constraint]) -> "Conjunction":
        seen: dict[Constraint, None] = {}
        for c in constraints:
            c = normalize_constraint(c)
            if c.is_trivially_true():
                continue
            if c.is_trivially_false():
                return FALSE_CONJ
            seen[c] = None
        return cls(tuple(sorted(seen, key=Constraint.sort_key)))

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    @property
    def is_true(self) -> bool:
        return not self.constraints

    @property
    def is_false(self) -> bool:
        return any(c.is_trivially_false() for c in self.constraints)

    def variables(self) -> frozenset[Variable]:
        out: set[Variable] = set()
        for c in self.constraints:
            out.update(c.variables())
        return frozenset(out)

    def holds(self, point: Mapping[Variable, Fraction]) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def __and__(self, other: "Conjunction") -> "Conjunction":
        return Conjunction.of(self.constraints + tuple(other))

    def rename(self, mapping: Mapping[Variable, Variable]) -> "Conjunction":
        return Conjunction.of(c.rename(mapping) for c in self.constraints)

    def substitute(self, mapping: Mapping[Variable, LinearTerm]) -> "Conjunction":
        return Conjunction.of(c.substitute(mapping) for c in self.constraints)

    def sort_key(self):
        return tuple(c.sort_key() for c in self.constraints)

    def __str__(self) -> str:
        if not self.constraints:
            return "true"
        return " & ".join(str(c) for c in self.constraints)


TRUE_CONJ = Conjunction(())
FALSE_CONJ = Conjunction((FALSE_CONSTRAINT,))


@dataclass(frozen=True)
class DNFFormula:
    """Disjunction of conjunctions; no disjuncts is false."""

    disjuncts: tuple[Conjunction, ...] = ()

    @classmethod
    def of(cls, disjuncts: Iterable[Conjunction]) -> "DNFFormula":
        seen: dict[Conjunction, None] = {}
        for d in disjuncts:
            if d.is_false:
                continue
            if d.is_true:
                return TRUE
            seen[d] = None
        return cls(tuple(sorted(seen, key=Conjunction.sort_key)))

    @classmethod
    def conj(cls, constraints: Iterable[Constraint]) -> "DNFFormula":
        return cls.of([Conjunction.of(constraints)])

    def __iter__(self) -> Iterator[Conjunction]:
        return iter(self.disjuncts)

    def __len__(self) -> int:
        return len(self.disjuncts)

    @property
    def is_true(self) -> bool:
        return len(self.disjuncts) == 1 and self.disjuncts[0].is_true

    @property
    def is_false(self) -> bool:
        return not self.disjuncts

    def variables(self) -> frozenset[Variable]:
        out: set[Variable] = set()
        for d in self.disjuncts:
            out.update(d.variables())
        return frozenset(out)

    def holds(self, point: Mapping[Variable, Fraction]) -> bool:
        return any(d.holds(point) for d in self.disjuncts)

    def __or__(self, other: "DNFFormula") -> "DNFFormula":
        return DNFFormula.of(self.disjuncts + other.disjuncts)

    def __and__(self, other: "DNFFormula") -> "DNFFormula":
        return DNFFormula.of(a & b for a in self.disjuncts for b in other.disjuncts)

    def negate(self) -> "DNFFormula":
        result = TRUE
        for d in self.disjuncts:
            alternatives = [
                Conjunction.of([n]) for c in d for n in negate_constraint(c)
            ]
            result = result & DNFFormula.of(alternatives)
        return result

    def rename(self, mapping: Mapping[Variable, Variable]) -> "DNFFormula":
        return DNFFormula.of(d.rename(mapping) for d in self.disjuncts)

    def substitute(self, mapping: Mapping[Variable, LinearTerm]) -> "DNFFormula":
        return DNFFormula.of(d.substitute(mapping) for d in self.disjuncts)

    def __str__(self) -> str:
        if not self.disjuncts:
            return "false"
        if len(self.disjuncts) == 1:
            return str(self.disjuncts[0])
        return " | ".join(f"({d})" for d in self.disjuncts)


TRUE = DNFFormula((TRUE_CONJ,))
FALSE = DNFFormula(())


@dataclass(frozen=True)
class PredicateSymbol:
    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Atom:
    predicate: PredicateSymbol
    args: tuple[Variable, ...]

    def __post_init__(self):
        if len(self.args) != self.predicate.arity:
            raise InputError(
                f"atom {self.predicate.name} expects {self.predicate.arity} "
                f"arguments, got {len(self.args)}"
            )
        if len(set(self.args)) != len(self.args):
            raise InputError(f"atom {self.predicate.name} repeats an argument variable")

    def rename(self, mapping: Mapping[Variable, Variable]) -> "Atom":
        return Atom(self.predicate, tuple(mapping.get(v, v) for v in self.args))

    def __str__(self) -> str:
        return f"{self.predicate.name}({', '.join(v.name for v in self.args)})"


Head = Union[Atom, DNFFormula]


@dataclass(frozen=True)
class HornClause:
    id: int
    body_atoms: tuple[Atom, ...]
    body_constraint: Conjunction
    head: Head

    @property
    def is_query(self) -> bool:
        return not isinstance(self.head, Atom)

    def variables(self) -> frozenset[Variable]:
        out = set(self.body_constraint.variables())
        for a in self.body_atoms:
            out.update(a.args)
        if isinstance(self.head, Atom):
            out.update(self.head.args)
        else:
            out.update(self.head.variables())
        return frozenset(out)

    def __str__(self) -> str:
        body = [str(a) for a in self.body_atoms]
        body += [str(c) for c in self.body_constraint]
        return f"{' & '.join(body) or 'true'} -> {self.head}"


@dataclass(frozen=True)
class WfCondition:
    predicate: PredicateSymbol

    def __post_init__(self):
        if self.predicate.arity % 2:
            raise InputError(f"wf condition on {self.predicate} needs even arity")

    @property
    def half(self) -> int:
        return self.predicate.arity // 2


@dataclass(frozen=True)
class ClauseSystem:
    predicates: tuple[PredicateSymbol, ...] = ()
    clauses: tuple[HornClause, ...] = ()
    wf_conditions: tuple[WfCondition, ...] = ()

    def __post_init__(self):
        declared = set(self.predicates)
        if len(declared) != len(self.predicates):
            raise InputError("duplicate predicate declaration")
        names: dict[str, PredicateSymbol] = {}
        for p in self.predicates:
            if p.name in names:
                raise InputError(f"predicate {p.name} declared with two arities")
            names[p.name] = p
        ids = set()
        for cl in self.clauses:
            if cl.id in ids:
                raise InputError(f"duplicate clause id {cl.id}")
            ids.add(cl.id)
            atoms = list(cl.body_atoms)
            if isinstance(cl.head, Atom):
                atoms.append(cl.head)
            for a in atoms:
                if a.predicate not in declared:
                    raise InputError(f"undeclared predicate {a.predicate}")
        for w in self.wf_conditions:
            if w.predicate not in declared:
                raise InputError(f"wf condition on undeclared predicate {w.predicate}")

    def predicate(self, name: str) -> PredicateSymbol:
        for p in self.predicates:
            if p.name == name:
                return p
        raise KeyError(name)

    def clause(self, clause_id: int) -> HornClause:
        for cl in self.clauses:
            if cl.id == clause_id:
                return cl
        raise KeyError(clause_id)

    def head_clauses(self, p: PredicateSymbol) -> list[HornClause]:
        return [
            cl for cl in self.clauses if isinstance(cl.head, Atom) and cl.head.predicate == p
        ]

    @property
    def query_clauses(self) -> list[HornClause]:
        return [cl for cl in self.clauses if cl.is_query]

    def next_clause_id(self) -> int:
        return max((cl.id for cl in self.clauses), default=-1) + 1

    def __str__(self) -> str:
        lines = [f"[{cl.id}] {cl}" for cl in self.clauses]
        lines += [f"wf({w.predicate})" for w in self.wf_conditions]
        return "\n".join(lines)


@dataclass(frozen=True)
class Solution:
    """Assignment of a DNF formula over formal parameters to every predicate."""

    assignment: Mapping[PredicateSymbol, DNFFormula]

    def __getitem__(self, p: PredicateSymbol) -> DNFFormula:
        return self.assignment[p]

    def __contains__(self, p: PredicateSymbol) -> bool:
        return p in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def items(self):
        return sorted(self.assignment.items(), key=lambda kv: (kv[0].name, kv[0].arity))

    def instantiate(self, atom: Atom) -> DNFFormula:
        if atom.predicate not in self.assignment:
            raise InputError(f"solution has no entry for {atom.predicate}")
        mapping = dict(zip(formals(atom.predicate.arity), atom.args))
        return self.assignment[atom.predicate].rename(mapping)

    def __str__(self) -> str:
        return "\n".join(f"{p.name}({', '.join(v.name for v in formals(p.arity))}) = {f}"
                         for p, f in self.items())


@dataclass(frozen=True)
class Implication:
    body: DNFFormula
    head: DNFFormula

    def __str__(self) -> str:
        return f"{self.body} -> {self.head}"


def evaluate(f: Union[DNFFormula, Conjunction, Constraint], point: Mapping[Variable, Fraction]) -> bool:
    """Exact truth value of ``f`` at ``point``; every variable of ``f`` must be assigned."""
    missing = f.variables() - set(point)
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise InputError(f"unassigned variables: {names}")
    return f.holds(point)


def substitute(sol: Solution, clause: HornClause) -> Implication:
    """Replace every atom of ``clause`` by its assigned formula."""
    body = DNFFormula.of([clause.body_constraint])
    for a in clause.body_atoms:
        body = body & sol.instantiate(a)
    if isinstance(clause.head, Atom):
        head = sol.instantiate(clause.head)
    else:
        head = clause.head
    return Implication(body, head)


def integer_scale(term: LinearTerm) -> LinearTerm:
    """Positive multiple of ``term`` with coprime integer coefficients (constant included)."""
    values = [c for _, c in term.coeffs] + [term.constant]
    values = [v for v in values if v]
    if not values:
        return term
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    g = 0
    for v in values:
        g = gcd(g, int(v * lcm))
    return term.scale(Fraction(lcm, g))


def conj_of(*constraints: Constraint) -> Conjunction:
    return Conjunction.of(constraints)


def dnf_of(*constraints: Constraint) -> DNFFormula:
    return DNFFormula.conj(constraints)


def variables_of(items: Sequence[Constraint]) -> frozenset[Variable]:
    out: set[Variable] = set()
    for c in items:
        out.update(c.variables())
    return frozenset(out)
