import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randsys import random_system
from rfhorn.core import Atom
from rfhorn.errors import RecursiveSystemError
from rfhorn.frontend import parse_system
from rfhorn.graph import Shape, analyze, derivable_predicates, find_cycle, prune_underivable
from worked import worked


def test_worked_is_a_tree():
    info = analyze(worked())
    assert [p.name for p in info.topo_order] == ["p", "q"]
    assert info.shape is Shape.TREE
    assert info.query_clauses == (2,)


def test_cycle_is_reported():
    s = parse_system("p(X) :- q(X).\nq(X) :- r(X).\nr(X) :- p(X).\nfalse :- p(X).")
    with pytest.raises(RecursiveSystemError) as err:
        analyze(s)
    assert {p.name for p in err.value.cycle} == {"p", "q", "r"}


def test_self_loop_is_recursion():
    s = parse_system("p(X) :- p(Y), X = Y + 1.")
    assert find_cycle(s) is not None


def test_shared_predicate_makes_a_dag():
    s = parse_system("p(X) :- X >= 0.\nfalse :- p(X), p(Y), X + Y < 0.")
    assert analyze(s).shape is Shape.DAG
    s = parse_system("p(X) :- X >= 0.\np(X) :- X =< -5.\nfalse :- p(X), X < -10.")
    assert analyze(s).shape is Shape.DAG


def test_empty_system():
    info = analyze(parse_system(""))
    assert info.topo_order == () and info.shape is Shape.TREE


def test_underivable_predicates_are_pruned():
    s = parse_system("p(X) :- q(X), X >= 0.\nfalse :- p(X).\nr(X) :- X = 1.")
    assert {p.name for p in derivable_predicates(s)} == {"r"}
    pruned, dead = prune_underivable(s)
    assert {p.name for p in dead} == {"p", "q"}
    assert [cl.id for cl in pruned.clauses] == [2]


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_topological_order_respects_dependencies(seed):
    s = random_system(seed)
    info = analyze(s)
    position = {p: i for i, p in enumerate(info.topo_order)}
    assert set(position) == set(s.predicates)
    for cl in s.clauses:
        if isinstance(cl.head, Atom):
            for a in cl.body_atoms:
                assert position[a.predicate] < position[cl.head.predicate]
