"""Conjunctions of linear rational constraints: models or Farkas certificates.

The engine is a bounded general simplex over exact rationals.  Every
constraint gets a slack variable whose bounds encode the relation; strict
bounds are handled with a symbolic infinitesimal, so values are pairs
``(rational, coefficient of epsilon)`` compared lexicographically.  Pivoting
follows Bland's rule, which both terminates and makes answers reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .core import Constraint, DNFFormula, LinearTerm, Rel, Variable, negate_constraint

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Model:
    assignment: Mapping[Variable, Fraction]

    def __getitem__(self, v: Variable) -> Fraction:
        return self.assignment[v]

    def __str__(self) -> str:
        items = sorted(self.assignment.items(), key=lambda kv: kv[0].index)
        return ", ".join(f"{v.name}={x}" for v, x in items)


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonzero weights by constraint position; equalities may carry negative weights."""

    weights: Mapping[int, Fraction]

    def weight(self, i: int) -> Fraction:
        return self.weights.get(i, ZERO)


@dataclass(frozen=True)
class Sat:
    model: Model


@dataclass(frozen=True)
class Unsat:
    certificate: FarkasCertificate


@dataclass(frozen=True)
class ProvedBranch:
    """One conjunct choice of the negated head together with its refutation.

    Certificate positions index ``body + negated_head``.
    """

    negated_head: tuple[Constraint, ...]
    certificate: FarkasCertificate


@dataclass(frozen=True)
class Valid:
    branches: tuple[ProvedBranch, ...]


@dataclass(frozen=True)
class Invalid:
    model: Model


def _dscale(x, k):
    return (x[0] * k, x[1] * k)


def _dadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


class _Tableau:
    def __init__(self, constraints: Sequence[Constraint]):
        self.constraints = constraints
        variables = sorted({v for c in constraints for v in c.variables()}, key=lambda v: v.index)
        self.variables = variables
        col = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        self.rows: dict[int, dict[int, Fraction]] = {}
        self.lower: dict[int, tuple] = {}
        self.upper: dict[int, tuple] = {}
        self.origin: dict[int, int] = {}
        self.value: dict[int, tuple] = {i: (ZERO, ZERO) for i in range(n)}
        self.conflict: FarkasCertificate | None = None
        slack = n
        for i, c in enumerate(constraints):
            k = c.term.constant
            if c.term.is_constant():
                if not c.holds({}):
                    if c.rel is Rel.EQ:
                        w = -ONE if k > 0 else ONE
                    else:
                        w = ONE
                    self.conflict = FarkasCertificate({i: w})
                    return
                continue
            self.rows[slack] = {col[v]: a for v, a in c.term.coeffs}
            self.origin[slack] = i
            self.value[slack] = (ZERO, ZERO)
            bound = (-k, ONE if c.rel is Rel.GT else ZERO)
            self.lower[slack] = bound
            if c.rel is Rel.EQ:
                self.upper[slack] = bound
            slack += 1

    def _violated(self):
        for b in sorted(self.rows):
            v = self.value[b]
            if b in self.lower and v < self.lower[b]:
                return b, True
            if b in self.upper and v > self.upper[b]:
                return b, False
        return None

    def _pivot_and_update(self, i: int, j: int, target) -> None:
        row_i = self.rows[i]
        a_ij = row_i[j]
        theta = _dscale(_dadd(target, _dscale(self.value[i], -ONE)), 1 / a_ij)
        self.value[i] = target
        self.value[j] = _dadd(self.value[j], theta)
        for k, row in self.rows.items():
            if k != i and j in row:
                self.value[k] = _dadd(self.value[k], _dscale(theta, row[j]))
        # x_j = (x_i - sum_{k != j} a_ik x_k) / a_ij
        inv = 1 / a_ij
        new_row = {i: inv}
        for k, a in row_i.items():
            if k != j:
                new_row[k] = -a * inv
        del self.rows[i]
        for k, row in self.rows.items():
            a = row.pop(j, None)
            if a is None:
                continue
            for m, b in new_row.items():
                s = row.get(m, ZERO) + a * b
                if s:
                    row[m] = s
                else:
                    row.pop(m, None)
        self.rows[j] = new_row

    def check(self) -> bool:
        if self.conflict is not None:
            return False
        while True:
            found = self._violated()
            if found is None:
                return True
            b, below = found
            row = self.rows[b]
            entering = None
            for j in sorted(row):
                a = row[j]
                if below == (a > 0):
                    if j not in self.upper or self.value[j] < self.upper[j]:
                        entering = j
                        break
                else:
                    if j not in self.lower or self.value[j] > self.lower[j]:
                        entering = j
                        break
            if entering is None:
                self.conflict = self._explain(b, below)
                return False
            self._pivot_and_update(b, entering, self.lower[b] if below else self.upper[b])

    def _explain(self, b: int, below: bool) -> FarkasCertificate:
        sign = ONE if below else -ONE
        weights: dict[int, Fraction] = {}

        def add(var, w):
            idx = self.origin[var]
            weights[idx] = weights.get(idx, ZERO) + w

        add(b, sign)
        for j, a in self.rows[b].items():
            add(j, -sign * a)
        return FarkasCertificate({i: w for i, w in sorted(weights.items()) if w})

    def model(self) -> Model:
        delta = ONE
        for var, (lr, ld) in self.lower.items():
            vr, vd = self.value[var]
            if ld > vd:
                delta = min(delta, (vr - lr) / (ld - vd))
        for var, (ur, ud) in self.upper.items():
            vr, vd = self.value[var]
            if vd > ud:
                delta = min(delta, (ur - vr) / (vd - ud))
        return Model({v: self.value[i][0] + self.value[i][1] * delta
                      for i, v in enumerate(self.variables)})


def check_sat(constraints: Iterable[Constraint]) -> Union[Sat, Unsat]:
    """Decide a conjunction; certificate positions follow the input order."""
    constraints = tuple(constraints)
    tab = _Tableau(constraints)
    if tab.check():
        model = tab.model()
        assert all(c.holds(model.assignment) for c in constraints), "simplex model check failed"
        return Sat(model)
    cert = tab.conflict
    assert verify_certificate(constraints, cert), "simplex produced a bad certificate"
    return Unsat(cert)


def weighted_sum(constraints: Sequence[Constraint], weights: Mapping[int, Fraction]) -> LinearTerm:
    total = LinearTerm()
    for i, w in weights.items():
        if w:
            total = total + constraints[i].term.scale(w)
    return total


def verify_certificate(constraints: Sequence[Constraint], cert: FarkasCertificate) -> bool:
    """Recompute the weighted sum and test that it is a contradiction."""
    constraints = tuple(constraints)
    strict = False
    for i, w in cert.weights.items():
        if not 0 <= i < len(constraints):
            return False
        c = constraints[i]
        if c.rel is not Rel.EQ and w < 0:
            return False
        if c.rel is Rel.GT and w > 0:
            strict = True
    total = weighted_sum(constraints, cert.weights)
    if total.coeffs:
        return False
    return total.constant < 0 or (strict and total.constant == 0)


def check_valid(body: Iterable[Constraint], head: DNFFormula) -> Union[Valid, Invalid]:
    """Validity of ``body -> head`` via refutation of ``body & not head``.

    The negated head is explored as a tree of literal choices, one per head
    disjunct; a prefix that is already refuted closes the whole subtree.
    """
    body = tuple(body)
    choices = [[n for c in d for n in negate_constraint(c)] for d in head.disjuncts]
    branches: list[ProvedBranch] = []

    def explore(k: int, chosen: tuple[Constraint, ...]):
        result = check_sat(body + chosen)
        if isinstance(result, Unsat):
            branches.append(ProvedBranch(chosen, result.certificate))
            return None
        if k == len(choices):
            return result.model
        for lit in choices[k]:
            model = explore(k + 1, chosen + (lit,))
            if model is not None:
                return model
        return None

    model = explore(0, ())
    if model is None:
        return Valid(tuple(branches))
    point = dict(model.assignment)
    for v in sorted(head.variables() | {v for c in body for v in c.variables()}, key=lambda v: v.index):
        point.setdefault(v, ZERO)
    return Invalid(Model(point))


def is_valid(body: Iterable[Constraint], head: DNFFormula) -> bool:
    return isinstance(check_valid(body, head), Valid)


def implies(a: DNFFormula, b: DNFFormula) -> bool:
    """Whether ``a -> b`` holds over the rationals."""
    return all(is_valid(d, b) for d in a.disjuncts)


def equivalent(a: DNFFormula, b: DNFFormula) -> bool:
    return implies(a, b) and implies(b, a)


def is_satisfiable(constraints: Iterable[Constraint]) -> bool:
    return isinstance(check_sat(constraints), Sat)
