from hypothesis import given, settings
from hypothesis import strategies as st

from randsys import random_ranking_relation
from rfhorn.core import Atom, DNFFormula, FALSE, eq, formals, ge, le
from rfhorn.frontend import parse_system
from rfhorn.lra import equivalent, is_valid
from rfhorn.wf import (
    NoLinearRanking,
    RankingWitness,
    Unknown,
    eliminate_wf,
    synthesize_ranking,
    wf_relation,
)
from worked import worked_wf

S, T = formals(2)


def test_worked_replacement_clause():
    s = worked_wf()
    out = eliminate_wf(s)
    assert not out.wf_conditions
    [extra] = out.clauses[len(s.clauses):]
    assert isinstance(extra.body_atoms[0], Atom) and extra.body_atoms[0].predicate.name == "r"
    a, b = extra.body_atoms[0].args
    assert equivalent(extra.head, DNFFormula.conj([le(a, 0), ge(b, a + 1)]))


def test_worked_relation():
    rel = wf_relation(worked_wf(), worked_wf().predicate("r"))
    assert equivalent(rel, DNFFormula.conj([le(S, 0), ge(T, S + 10)]))


def test_worked_witness():
    w = synthesize_ranking(DNFFormula.conj([le(S, 0), ge(T, S + 10)]), 1)
    assert isinstance(w, RankingWitness)
    assert w.coefficients[S] == -1 and w.bound == 0 and w.decrease == 1


def test_identity_has_no_ranking():
    assert isinstance(synthesize_ranking(DNFFormula.conj([eq(T, S)]), 1), NoLinearRanking)


def test_unbounded_decrease_has_no_ranking():
    assert isinstance(synthesize_ranking(DNFFormula.conj([le(T, S - 1)]), 1), NoLinearRanking)


def test_empty_relation_is_trivially_ranked():
    w = synthesize_ranking(FALSE, 1)
    assert isinstance(w, RankingWitness) and w.decrease > 0


def test_small_steps_are_rescaled():
    w = synthesize_ranking(DNFFormula.conj([ge(S, 0), le(2 * T, 2 * S - 1)]), 1)
    assert isinstance(w, RankingWitness)
    rel = DNFFormula.conj([ge(S, 0), le(2 * T, 2 * S - 1)])
    assert is_valid(rel.disjuncts[0], w.formal_relation(1))


def test_disjunctive_relation_needs_one_function():
    rel = DNFFormula.conj([ge(S, 0), le(T, S - 1)]) | DNFFormula.conj([ge(S, 5), le(T, S - 3)])
    w = synthesize_ranking(rel, 1)
    assert isinstance(w, RankingWitness)
    for d in rel.disjuncts:
        assert is_valid(d, w.formal_relation(1))


def test_unknown_propagates():
    s = parse_system("p(X) :- X >= 0.\nr(X, Y) :- p(X), Y = X.\nwf(r(A, B)).")
    assert isinstance(eliminate_wf(s), Unknown)


def test_dead_wf_predicate():
    s = parse_system("r(X, Y) :- q(X, Y).\nwf(r(A, B)).")
    out = eliminate_wf(s)
    assert not out.wf_conditions


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_ranking_witness_entailments(seed):
    rel, half = random_ranking_relation(seed)
    w = synthesize_ranking(rel, half)
    assert isinstance(w, RankingWitness) and w.decrease > 0
    pre = formals(2 * half)[:half]
    post = formals(2 * half)[half:]
    f_pre, f_post = w.function(pre), w.function(post)
    [conj] = rel.disjuncts
    assert is_valid(conj, DNFFormula.conj([ge(f_pre, w.bound)]))
    assert is_valid(conj, DNFFormula.conj([ge(f_pre - f_post, w.decrease)]))
