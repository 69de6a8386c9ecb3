import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randsys import derivation_count, random_system
from rfhorn.core import Atom, DNFFormula, eq, ge, le
from rfhorn.errors import ResourceLimitError, UnresolvableAtom
from rfhorn.frontend import parse_system
from rfhorn.graph import prune_underivable
from rfhorn.lra import equivalent
from rfhorn.unfold import unfold
from worked import worked


def test_worked_ground_implication():
    [(tree, impl)] = unfold(worked())
    assert str(tree) == "2(1(0))"
    # post-order: p's fact, then q's equation, then the query's own constraint
    assert [t.clause_id for t in impl.body] == [0, 1, 2]
    assert [t.path for t in impl.body] == [(0, 0), (0,), ()]
    root = tree.root
    q_node = root.children[0]
    p_node = q_node.children[0]
    y, z = root.body_atoms[0].args
    assert q_node.head.args == (y, z)
    (u,) = p_node.head.args
    # a >= 10, c = a + b, b <= 0 with a = u, b = y, c = z
    expected = DNFFormula.conj([ge(u, 10), eq(z, u + y), le(y, 0)])
    assert equivalent(DNFFormula.conj(impl.constraints), expected)
    assert impl.head == DNFFormula.conj([ge(z - y, 0)])


def test_each_instance_gets_fresh_variables():
    s = parse_system("p(X) :- X >= 0, Y = X.\nfalse :- p(A), p(B), A + B < 0.")
    [(tree, impl)] = unfold(s)
    locals_ = [n.renaming for n in tree.nodes() if n.path]
    left, right = locals_
    shared = set(left.values()) & set(right.values())
    assert not shared


def test_multiple_head_clauses_multiply():
    s = parse_system("p(X) :- X >= 0.\np(X) :- X =< -5.\nfalse :- p(X), p(Y), X + Y < -20.")
    assert len(unfold(s)) == 4


def test_unresolvable_atom():
    s = parse_system("false :- p(X).\nq(X) :- X >= 0.\nr(X) :- q(X).\nr(X) :- p(X).")
    with pytest.raises(UnresolvableAtom):
        unfold(s)


def test_derivation_cap():
    s = parse_system("p(X) :- X >= 0.\np(X) :- X =< -5.\nfalse :- p(X), p(Y), p(Z).")
    with pytest.raises(ResourceLimitError):
        unfold(s, max_derivations=5)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_derivation_count_and_tags(seed):
    s, _ = prune_underivable(random_system(seed))
    derivations = unfold(s)
    assert len(derivations) == derivation_count(s)
    for tree, impl in derivations:
        paths = {n.path: n for n in tree.nodes()}
        for t in impl.body:
            assert paths[t.path].clause_id == t.clause_id
            assert t.constraint in paths[t.path].constraints
        # no atoms remain in the body
        assert not isinstance(impl.head, Atom)
