import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from rfhorn.core import (
    Constraint,
    DNFFormula,
    LinearTerm,
    Rel,
    TRUE,
    Variable,
    eq,
    ge,
    gt,
    le,
    lt,
    normalize_constraint,
)
from rfhorn.lra import (
    FarkasCertificate,
    Invalid,
    Sat,
    Unsat,
    Valid,
    check_sat,
    check_valid,
    equivalent,
    implies,
    verify_certificate,
    weighted_sum,
)

a, b, c, x, y = (Variable.fresh(n) for n in "abcxy")


def random_constraints(seed, n_vars=3, n=5, coeff=5):
    rng = random.Random(seed)
    vs = [Variable.fresh(f"v{i}") for i in range(n_vars)]
    out = []
    for _ in range(rng.randint(1, n)):
        coeffs = {v: rng.randint(-coeff, coeff) for v in rng.sample(vs, rng.randint(1, n_vars))}
        term = LinearTerm.of(coeffs, rng.randint(-coeff, coeff))
        out.append(normalize_constraint(Constraint(term, rng.choice(list(Rel)))))
    return out


def test_worked_refutation_certificate():
    # a >= 10, c = a + b, b <= 0 and the negated head b > c
    body = [ge(a, 10), eq(c, a + b), le(b, 0)]
    result = check_sat(body + [gt(b, c)])
    assert isinstance(result, Unsat)
    assert verify_certificate(body + [gt(b, c)], result.certificate)
    total = weighted_sum(body + [gt(b, c)], result.certificate.weights)
    assert not total.coeffs and total.constant <= 0


def test_strict_contradiction_needs_strict_weight():
    cons = [ge(x, 1), gt(x, 1), lt(x, 1)]
    result = check_sat(cons)
    assert isinstance(result, Unsat)
    assert verify_certificate(cons, result.certificate)
    # x >= 0 and -x >= 0 with weight 1 each sums to 0 >= 0, not a contradiction
    assert not verify_certificate([ge(x, 0), le(x, 0)], FarkasCertificate({0: Fraction(1), 1: Fraction(1)}))


def test_certificate_rejects_negative_inequality_weight():
    cons = [ge(x, 1), le(x, 0)]
    assert verify_certificate(cons, FarkasCertificate({0: Fraction(1), 1: Fraction(1)}))
    assert not verify_certificate(cons, FarkasCertificate({0: Fraction(-1), 1: Fraction(1)}))


def test_empty_conjunction_is_sat():
    assert isinstance(check_sat([]), Sat)


def test_strict_bounds_give_interior_model():
    result = check_sat([gt(x, 0), lt(x, Fraction(1, 1000))])
    assert isinstance(result, Sat)
    assert 0 < result.model[x] < Fraction(1, 1000)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_check_sat_self_certifies(seed):
    cons = random_constraints(seed)
    result = check_sat(cons)
    if isinstance(result, Sat):
        assert all(c.holds(result.model.assignment) for c in cons)
    else:
        assert verify_certificate(cons, result.certificate)


def test_gap_implication_is_invalid():
    result = check_valid([ge(x, 1)], DNFFormula.conj([ge(x, 2)]))
    assert isinstance(result, Invalid)
    assert 1 <= result.model[x] < 2


def test_valid_implication_has_branches():
    result = check_valid([ge(x, 2)], DNFFormula.conj([ge(x, 1), gt(x, 0)]))
    assert isinstance(result, Valid)
    # one refuted branch per negated literal of the single head disjunct
    assert len(result.branches) == 2
    for br in result.branches:
        assert verify_certificate([ge(x, 2)] + list(br.negated_head), br.certificate)


def test_disjunctive_head():
    body = [ge(x, -1), le(x, 1)]
    head = DNFFormula.conj([ge(x, 0)]) | DNFFormula.conj([le(x, 0)])
    assert isinstance(check_valid(body, head), Valid)
    head = DNFFormula.conj([gt(x, 0)]) | DNFFormula.conj([lt(x, 0)])
    bad = check_valid(body, head)
    assert isinstance(bad, Invalid) and bad.model[x] == 0


def test_true_and_false_heads():
    assert isinstance(check_valid([ge(x, 0)], TRUE), Valid)
    assert isinstance(check_valid([ge(x, 0), lt(x, 0)], DNFFormula(())), Valid)
    assert isinstance(check_valid([], DNFFormula(())), Invalid)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_check_valid_results_are_checkable(seed):
    cons = random_constraints(seed, n=6)
    body, head_cons = cons[:-1], cons[-1:]
    head = DNFFormula.conj(head_cons)
    result = check_valid(body, head)
    if isinstance(result, Invalid):
        point = result.model.assignment
        assert all(c.holds(point) for c in body) and not head.holds(point)
    else:
        for br in result.branches:
            assert verify_certificate(list(body) + list(br.negated_head), br.certificate)


def test_implies_and_equivalent():
    f = DNFFormula.conj([ge(c - b, 10), le(b, 0)])
    g = DNFFormula.conj([ge(c, b + 10), ge(-b, 0)])
    assert equivalent(f, g)
    assert implies(f, DNFFormula.conj([ge(c, b)]))
    assert not implies(DNFFormula.conj([ge(c, b)]), f)
