from hypothesis import given, settings
from hypothesis import strategies as st

from randsys import random_system
from rfhorn.check import check_clauses
from rfhorn.core import DNFFormula, Rel, TRUE, formals, ge
from rfhorn.extract import ProvedDerivation, extract_solution, node_interpolants
from rfhorn.frontend import parse_system
from rfhorn.graph import Shape, analyze, prune_underivable
from rfhorn.lra import Valid, check_valid, is_valid
from rfhorn.unfold import unfold
from worked import worked

X1, X2 = formals(2)


def prove_all(system):
    out = []
    for tree, impl in unfold(system):
        result = check_valid(impl.constraints, impl.head)
        if not isinstance(result, Valid):
            return None
        out.append(ProvedDerivation(tree, impl, result))
    return out


def test_worked_solution():
    s = worked()
    sol = extract_solution(s, prove_all(s))
    assert sol[s.predicate("p")] == DNFFormula.conj([ge(X1, 10)])
    assert sol[s.predicate("q")] == DNFFormula.conj([ge(X2 - X1, 10)])


def test_q_interpolant_is_the_weighted_sum():
    """(u >= 10) * 1 + (w = u + v) * (-1) gives w >= 10 + v."""
    s = worked()
    [(tree, impl)] = unfold(s)
    [branch] = check_valid(impl.constraints, impl.head).branches
    weights = branch.certificate.weights
    # only p's fact, q's equation and the negated head take part
    assert weights.get(2, 0) == 0 and weights[0] == 1 and abs(weights[1]) == 1
    by_path = {ni.node.path: ni.formula for ni in node_interpolants(tree, impl, branch)}
    v, w = tree.root.children[0].head.args
    (u,) = tree.root.children[0].children[0].head.args
    assert by_path[(0,)] == DNFFormula.conj([ge(w - v, 10)]).disjuncts[0]
    assert by_path[(0, 0)] == DNFFormula.conj([ge(u, 10)]).disjuncts[0]


def test_zero_weights_give_true():
    s = parse_system("p(X) :- X >= 0.\nfalse :- p(X), Y > 0, Y < 0.")
    sol = extract_solution(s, prove_all(s))
    assert sol[s.predicate("p")] == TRUE


def test_predicate_without_occurrence_is_true():
    s = parse_system("p(X) :- X >= 0.\nr(X) :- X >= 0.\nfalse :- p(X), X < 0.")
    sol = extract_solution(s, prove_all(s))
    assert sol[s.predicate("r")] == TRUE


def test_equalities_only_give_equality():
    s = parse_system("p(X) :- X = 3.\nX = 3 :- p(X).")
    sol = extract_solution(s, prove_all(s))
    [conj] = sol[s.predicate("p")].disjuncts
    assert all(c.rel is Rel.EQ for c in conj)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_local_soundness_and_tree_soundness(seed):
    s, _ = prune_underivable(random_system(seed))
    proved = prove_all(s)
    if proved is None:
        return
    for pd in proved:
        for branch in pd.proof.branches:
            interps = {ni.node.path: ni.formula for ni in node_interpolants(pd.tree, pd.implication, branch)}
            for node in pd.tree.nodes():
                if not node.path:
                    continue
                assert interps[node.path].variables() <= set(node.head.args)
                body = list(node.constraints)
                for child in node.children:
                    body += list(interps[child.path])
                assert is_valid(body, DNFFormula.of([interps[node.path]]))
    if analyze(s).shape is Shape.TREE:
        assert check_clauses(s, extract_solution(s, proved))
