import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rfhorn.core import (
    Atom,
    ClauseSystem,
    Conjunction,
    Constraint,
    DNFFormula,
    FALSE,
    HornClause,
    LinearTerm,
    PredicateSymbol,
    Rel,
    Solution,
    TRUE,
    Variable,
    WfCondition,
    eq,
    evaluate,
    formals,
    ge,
    gt,
    integer_scale,
    le,
    negate_constraint,
    normalize_constraint,
    substitute,
)
from rfhorn.errors import InputError

X, Y, Z = formals(3)
VARS = (X, Y, Z)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=6)
terms = st.builds(
    lambda cs, k: LinearTerm.of(dict(zip(VARS, cs)), k),
    st.lists(fractions, min_size=3, max_size=3),
    fractions,
)
rels = st.sampled_from(list(Rel))
constraints = st.builds(Constraint, terms, rels)
points = st.builds(lambda vs: dict(zip(VARS, vs)), st.lists(fractions, min_size=3, max_size=3))
conjunctions = st.lists(constraints.map(normalize_constraint), max_size=3).map(Conjunction.of)
formulas = st.lists(conjunctions, max_size=3).map(DNFFormula.of)


def test_linear_term_arithmetic():
    t = 2 * X + Y - 3
    assert t.coeff(X) == 2 and t.coeff(Y) == 1 and t.constant == -3
    assert (t - t).is_constant() and (t - t).constant == 0
    assert t.evaluate({X: Fraction(1), Y: Fraction(1, 2)}) == Fraction(-1, 2)
    assert str(X - Y + 1) == "X1 - X2 + 1"


def test_evaluate_needs_every_variable():
    with pytest.raises(InputError):
        (X + Y).evaluate({X: Fraction(1)})
    with pytest.raises(InputError):
        evaluate(DNFFormula.conj([ge(X, 1)]), {})


def test_normal_form_examples():
    assert normalize_constraint(Constraint(2 * X - 4, Rel.GE)) == ge(X, 2)
    assert normalize_constraint(Constraint(-2 * X + 4, Rel.EQ)) == eq(X, 2)
    assert le(X, 3) == normalize_constraint(Constraint(-X + 3, Rel.GE))
    # constants collapse to sign
    assert normalize_constraint(Constraint(LinearTerm.const(5), Rel.GE)).term.constant == 1
    assert normalize_constraint(Constraint(LinearTerm.const(0), Rel.GT)).is_trivially_false()


@given(constraints, points)
def test_normalization_preserves_meaning(c, point):
    n = normalize_constraint(c)
    assert n.holds(point) == c.holds(point)
    assert normalize_constraint(n) == n
    if n.term.coeffs:
        lead = n.term.coeffs[0][1]
        assert lead == 1 if n.rel is Rel.EQ else abs(lead) == 1


@given(constraints, points)
def test_negation_is_complement(c, point):
    negs = negate_constraint(normalize_constraint(c))
    assert any(n.holds(point) for n in negs) != c.holds(point)


@given(formulas, points)
def test_dnf_negation_is_complement(f, point):
    assert f.negate().holds(point) != f.holds(point)


@given(formulas, formulas, points)
def test_dnf_connectives(f, g, point):
    assert (f | g).holds(point) == (f.holds(point) or g.holds(point))
    assert (f & g).holds(point) == (f.holds(point) and g.holds(point))


def test_conjunction_is_canonical():
    a = Conjunction.of([ge(X, 1), ge(Y, 2), ge(X, 1)])
    b = Conjunction.of([ge(Y, 2), ge(2 * X, 2)])
    assert a == b and len(a) == 2
    assert Conjunction.of([ge(X, 1), gt(LinearTerm.const(0), 0)]).is_false
    assert Conjunction.of([]).is_true


def test_true_false_formulas():
    assert TRUE.is_true and FALSE.is_false
    assert (TRUE | DNFFormula.conj([ge(X, 1)])).holds({X: Fraction(0)})
    assert (FALSE & TRUE).is_false


def test_fresh_variables_are_distinct():
    a, b = Variable.fresh("x"), Variable.fresh("x")
    assert a != b and a.name == b.name


def test_atom_rejects_bad_arguments():
    p = PredicateSymbol("p", 2)
    with pytest.raises(InputError):
        Atom(p, (X,))
    with pytest.raises(InputError):
        Atom(p, (X, X))


def test_wf_condition_needs_even_arity():
    with pytest.raises(InputError):
        WfCondition(PredicateSymbol("r", 3))
    assert WfCondition(PredicateSymbol("r", 4)).half == 2


def test_clause_system_validation():
    p = PredicateSymbol("p", 1)
    c0 = HornClause(0, (), Conjunction.of([ge(X, 0)]), Atom(p, (X,)))
    with pytest.raises(InputError):
        ClauseSystem((p,), (c0, c0))
    with pytest.raises(InputError):
        ClauseSystem((), (c0,))
    s = ClauseSystem((p,), (c0,))
    assert s.next_clause_id() == 1 and s.head_clauses(p) == [c0] and not s.query_clauses


def test_substitute_instantiates_formals():
    p = PredicateSymbol("p", 1)
    u, v = Variable.fresh("u"), Variable.fresh("v")
    clause = HornClause(0, (Atom(p, (u,)),), Conjunction.of([eq(v, u + 1)]), DNFFormula.conj([ge(v, 1)]))
    sol = Solution({p: DNFFormula.conj([ge(X, 0)])})
    impl = substitute(sol, clause)
    assert impl.body == DNFFormula.conj([ge(u, 0), eq(v, u + 1)])
    assert impl.head == DNFFormula.conj([ge(v, 1)])


def test_solution_instantiates_atom():
    p = PredicateSymbol("p", 2)
    u, v = Variable.fresh("u"), Variable.fresh("v")
    sol = Solution({p: DNFFormula.conj([ge(Y - X, 10)])})
    assert sol.instantiate(Atom(p, (u, v))) == DNFFormula.conj([ge(v - u, 10)])


@given(terms)
def test_integer_scale_yields_coprime_integers(t):
    s = integer_scale(t)
    values = [c for _, c in s.coeffs] + [s.constant]
    assert all(v.denominator == 1 for v in values)
    nonzero = [int(v) for v in values if v]
    if nonzero:
        from math import gcd
        g = 0
        for v in nonzero:
            g = gcd(g, v)
        assert g == 1
        # positive multiple of the input
        ratio = [s_c / t_c for (_, s_c), (_, t_c) in zip(s.coeffs, t.coeffs)]
        assert all(r > 0 for r in ratio)


def test_random_points_agree_with_conjunction():
    rng = random.Random(0)
    conj = Conjunction.of([ge(X, 0), le(X + Y, 5), gt(Z, -1)])
    for _ in range(50):
        point = {v: Fraction(rng.randint(-10, 10)) for v in VARS}
        assert conj.holds(point) == all(c.holds(point) for c in conj)
