import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfhorn.core import (
    Conjunction,
    Constraint,
    DNFFormula,
    LinearTerm,
    Rel,
    Variable,
    eq,
    ge,
    gt,
    le,
    lt,
    normalize_constraint,
)
from rfhorn.errors import ResourceLimitError
from rfhorn.lra import Sat, check_sat, equivalent, implies, is_satisfiable
from rfhorn.qelim import eliminate, eliminate_conjunction, infimum, project_onto, remove_redundant

a, b, c, x, y, z = (Variable.fresh(n) for n in "abcxyz")


def test_worked_projection():
    f = DNFFormula.conj([ge(a, 10), eq(c, a + b), le(b, 0)])
    start = time.perf_counter()
    g = eliminate(f, {a})
    assert time.perf_counter() - start < 0.1
    assert a not in g.variables()
    assert equivalent(g, DNFFormula.conj([ge(c, b + 10), le(b, 0)]))


def test_interval_projection():
    f = DNFFormula.conj([ge(x, y), le(x, z)])
    assert eliminate(f, {x}) == DNFFormula.conj([ge(z - y, 0)])


def test_strictness_is_kept():
    f = DNFFormula.conj([gt(x, y), lt(x, z)])
    assert eliminate(f, {x}) == DNFFormula.conj([gt(z - y, 0)])


def test_unsatisfiable_disjunct_disappears():
    f = DNFFormula.conj([ge(x, 1), le(x, 0)]) | DNFFormula.conj([ge(x, y)])
    assert eliminate(f, {x}).is_true


def test_no_variables_to_eliminate():
    f = DNFFormula.conj([ge(x, 1)])
    assert eliminate(f, set()) == f
    assert project_onto(f, {x}) == f


def test_redundancy_removal():
    cons = [ge(x, 1), ge(x, 0), ge(x + y, 0), ge(y, 0)]
    kept = remove_redundant(cons)
    assert Conjunction.of(kept) == Conjunction.of([ge(x, 1), ge(y, 0)])


def test_constraint_cap():
    rng = random.Random(1)
    vs = [Variable.fresh(f"v{i}") for i in range(4)]
    cons = []
    for _ in range(12):
        coeffs = {v: rng.choice([-1, 1]) * rng.randint(1, 5) for v in vs}
        cons.append(normalize_constraint(Constraint(LinearTerm.of(coeffs, rng.randint(-3, 30)), Rel.GE)))
    with pytest.raises(ResourceLimitError):
        eliminate_conjunction(cons, vs[:3], max_constraints=5)


def random_conjunction(rng, vs, n):
    out = []
    for _ in range(n):
        coeffs = {v: rng.randint(-4, 4) for v in rng.sample(vs, rng.randint(1, len(vs)))}
        out.append(normalize_constraint(Constraint(LinearTerm.of(coeffs, rng.randint(-6, 6)),
                                                   rng.choice([Rel.GE, Rel.GE, Rel.GT, Rel.EQ]))))
    return out


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_projection_is_exact(seed):
    """Soundness by implication; completeness by extending sampled projected points."""
    rng = random.Random(seed)
    vs = [Variable.fresh(f"v{i}") for i in range(4)]
    cons = random_conjunction(rng, vs, rng.randint(1, 6))
    gone = set(rng.sample(vs, rng.randint(1, 3)))
    f = DNFFormula.conj(cons)
    g = eliminate(f, gone)
    assert not g.variables() & gone
    assert implies(f, g)
    kept = [v for v in vs if v not in gone]
    for _ in range(10):
        point = {v: Fraction(rng.randint(-12, 12), rng.randint(1, 3)) for v in kept}
        if g.holds(point):
            fixed = [c.substitute({v: LinearTerm.const(q) for v, q in point.items()}) for c in cons]
            assert isinstance(check_sat(fixed), Sat), "projected point has no witness"


def test_infimum_values():
    assert infimum(LinearTerm.var(x), [ge(x, 3)]) == 3
    assert infimum(LinearTerm.var(x), [gt(x, 3)]) == 3
    assert infimum(LinearTerm.var(x), [le(x, 3)]) is None
    assert infimum(x - y, [ge(x, 1), le(y, -2)]) == 3
    assert infimum(LinearTerm.var(x), [eq(x, 7)]) == 7


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_infimum_is_greatest_lower_bound(seed):
    rng = random.Random(seed)
    vs = [Variable.fresh(f"v{i}") for i in range(3)]
    cons = random_conjunction(rng, vs, rng.randint(1, 5))
    if not is_satisfiable(cons):
        return
    obj = LinearTerm.of({v: rng.randint(-3, 3) for v in vs})
    m = infimum(obj, cons)
    if m is None:
        # unbounded below: some point beats any fixed bound
        assert is_satisfiable(cons + [normalize_constraint(Constraint(-obj - 10**6, Rel.GE))])
        return
    assert not is_satisfiable(cons + [normalize_constraint(Constraint(m - obj, Rel.GT))])
    near = m + Fraction(1, 1000)
    assert is_satisfiable(cons + [normalize_constraint(Constraint(near - obj, Rel.GE))])
