import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randsys import random_system
from rfhorn.check import check_solution, oracle
from rfhorn.core import DNFFormula, formals, ge
from rfhorn.errors import RecursiveSystemError, ResourceLimitError
from rfhorn.frontend import parse_system
from rfhorn.lra import equivalent
from rfhorn.solver import Limits, Solvable, Unsolvable, solve
from rfhorn.wf import Unknown
from worked import gap, worked, worked_wf

X1, X2 = formals(2)


def test_worked_system():
    s = worked()
    v = solve(s)
    assert isinstance(v, Solvable) and v.method == "interpolation"
    assert check_solution(s, v.solution)
    assert equivalent(v.solution[s.predicate("q")], DNFFormula.conj([ge(X2, X1 + 10)]))


def test_gap_is_unsolvable():
    v = solve(gap())
    assert isinstance(v, Unsolvable)
    cex = v.counterexample
    assert cex.is_genuine()
    [x] = cex.model.assignment.values()
    assert 1 <= x < 2


def test_worked_wf_system():
    s = worked_wf()
    v = solve(s)
    assert isinstance(v, Solvable)
    assert check_solution(s, v.solution)


def test_wf_without_ranking_is_unknown():
    s = parse_system("p(X) :- X >= 0.\nr(X, Y) :- p(X), Y = X.\nwf(r(A, B)).")
    assert isinstance(solve(s), Unknown)


def test_recursion_is_rejected():
    with pytest.raises(RecursiveSystemError):
        solve(parse_system("p(X) :- p(Y), X = Y + 1.\nfalse :- p(X)."))


def test_derivation_limit():
    s = parse_system("p(X) :- X >= 0.\np(X) :- X =< -5.\nfalse :- p(X), p(Y), p(Z).")
    with pytest.raises(ResourceLimitError):
        solve(s, Limits(max_derivations=3))


def test_underivable_body_predicate():
    s = parse_system("false :- p(X).\nq(X) :- X >= 0.")
    v = solve(s)
    assert isinstance(v, Solvable)
    assert v.solution[s.predicate("p")].is_false


def test_dag_falls_back_when_needed():
    # each derivation yields an equality for p; their conjunction is false
    s = parse_system("p(X) :- X = 0.\np(X) :- X = 10.\nfalse :- p(X), X = 5.")
    v = solve(s)
    assert isinstance(v, Solvable) and v.method == "least"
    assert check_solution(s, v.solution)


def test_empty_system():
    v = solve(parse_system(""))
    assert isinstance(v, Solvable) and len(v.solution) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_sound_and_complete(seed):
    s = random_system(seed)
    v = solve(s)
    if isinstance(v, Solvable):
        assert check_solution(s, v.solution)
    else:
        assert v.counterexample.is_genuine()
    assert isinstance(v, Solvable) == oracle(s).solvable
