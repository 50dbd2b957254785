from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from walkguess.arith import UniPoly
from walkguess.guess import (
    AlgebraicRelation,
    DifferentialRelation,
    GuessConfig,
    GuessReport,
    InsufficientTerms,
    PolynomialFormula,
    Recurrence,
    RelationSyntaxError,
    TrivialRelation,
    compress_zeros,
    format_relation,
    guess_algebraic,
    guess_ode,
    guess_polynomial,
    guess_recurrence,
    parse_relation,
    verification_details,
    verify_relation,
)
from walkguess.guess.fitting import exact_terms, sweep_shapes
from walkguess.guess.pipeline import Budget, guess_pipeline
from walkguess.sequences import closed_form_catalan, convolution_oracle, factorial
from walkguess.walks import ReturnToOrigin, StepSet, enumerate_dp

CATALAN = convolution_oracle(60)
CAT_REC = "(n + 2)*a(n+1) + (-4*n - 2)*a(n) = 0"
CAT_ALG = "(t)*C^2 + (-1)*C + (1) = 0"
SMALL = GuessConfig(min_verify=5)


def P(*cs, var="n"):
    return UniPoly(cs, var)


# -- polynomial formulas ------------------------------------------------------

def test_polynomial_gauss():
    rep = guess_polynomial([0, 1, 3, 6, 10])
    assert rep.verified
    assert rep.relation.poly == P(0, Fraction(1, 2), Fraction(1, 2))
    assert [rep.relation(n) for n in (4, 5, 6, 100)] == [10, 15, 21, 5050]


def test_polynomial_constant_and_squares():
    assert guess_polynomial([7, 7, 7, 7]).relation.poly == P(7)
    rep = guess_polynomial([sum(k * k for k in range(n + 1)) for n in range(7)])
    assert all(rep.relation(n) * 6 == n * (n + 1) * (2 * n + 1) for n in range(40))


def test_polynomial_refuted_and_short_input():
    assert guess_polynomial(CATALAN[:10]).status == GuessReport.NO_FIT
    with pytest.raises(InsufficientTerms):
        guess_polynomial([1, 2, 3])


# -- algebraic ------------------------------------------------------------------

def test_algebraic_catalan():
    rep = guess_algebraic(CATALAN[:14], 12, 12, SMALL)
    assert rep.verified and format_relation(rep.relation) == CAT_ALG
    assert rep.shape == (2, 1)


def test_algebraic_geometric():
    rep = guess_algebraic([1] * 20, 3, 3, SMALL)
    assert format_relation(rep.relation) == "(t - 1)*C + (1) = 0"
    assert rep.shape[0] == 1


def test_algebraic_aerated_partner_walks():
    # returns to zero with steps -1, 2 live on lengths divisible by 3
    counts = enumerate_dp(StepSet.of(-1, 2), ReturnToOrigin, 3 * 80).values
    h, g, r = compress_zeros(counts)
    assert (g, r) == (3, 0)
    rep = guess_algebraic(h, 6, 6)
    assert rep.verified and rep.shape[0] == 3
    assert rep.verification_depth >= 20


# -- recurrences ----------------------------------------------------------------

def test_recurrence_catalan():
    rep = guess_recurrence(CATALAN[:12], 12, 12, GuessConfig(min_verify=4))
    assert format_relation(rep.relation) == CAT_REC
    assert rep.relation.initial == (1,)


def test_recurrence_simple():
    assert format_relation(guess_recurrence([1] * 20, 3, 3, SMALL).relation) == "(1)*a(n+1) + (-1)*a(n) = 0"
    facts = [factorial(n) for n in range(20)]
    assert format_relation(guess_recurrence(facts, 3, 3, SMALL).relation) == "(1)*a(n+1) + (-n - 1)*a(n) = 0"


def test_recurrence_exceptional_indices_recorded():
    # c(n+1) = c(n) * (n - 3)/(n - 5) has q_1(n) = n - 5 vanishing at n = 5
    seq = [Fraction(1)]
    for n in range(40):
        seq.append(seq[-1] * (n - 3) / (n - 5) if n != 5 else Fraction(0))
    rec = Recurrence([P(3, -1), P(-5, 1)])
    v = verification_details(rec, seq)
    assert 5 in v.skipped and v.first_failure is None


# -- differential ---------------------------------------------------------------

def test_ode_examples():
    assert format_relation(guess_ode([1] * 20, 3, 3, SMALL).relation) == "(t - 1)*D[C] + (1)*C = 0"
    exp_terms = [Fraction(1, factorial(n)) for n in range(20)]
    assert format_relation(guess_ode(exp_terms, 3, 3, SMALL).relation) == "(1)*D[C] + (-1)*C = 0"


def test_ode_aerated_catalan():
    terms = [CATALAN[n // 2] if n % 2 == 0 else 0 for n in range(60)]
    rep = guess_ode(terms, 4, 6)
    assert rep.verified and rep.verification_depth >= 20
    # an independent re-check on more terms than were ever seen
    longer = [CATALAN[n // 2] if n % 2 == 0 else 0 for n in range(120)]
    assert verification_details(rep.relation, longer).full


# -- compression ----------------------------------------------------------------

def test_compress_zeros():
    assert compress_zeros([1, 0, 1, 0, 2, 0, 5, 0, 14]) == ([1, 1, 2, 5, 14], 2, 0)
    assert compress_zeros([1, 1, 2, 3]) == ([1, 1, 2, 3], 1, 0)
    assert compress_zeros([0, 0, 0, 0, 0, 0])[1] == 1


def test_all_zero_terms_are_degenerate():
    rep = guess_recurrence([0] * 30, 3, 3)
    assert rep.degenerate and rep.relation is None and rep.status == GuessReport.NO_FIT


def test_insufficient_terms_states_minimum():
    with pytest.raises(InsufficientTerms, match="needs"):
        guess_recurrence([1, 2, 3], 4, 4)


def test_float_terms_rejected():
    with pytest.raises(TypeError):
        exact_terms([1.0, 2.0])


# -- verification -----------------------------------------------------------------

def test_verify_catalan_depth():
    assert verify_relation(parse_relation(CAT_REC), CATALAN[:50]) == 49


def test_corrupted_term_refutes():
    bad = list(CATALAN[:50])
    bad[30] += 1
    v = verification_details(parse_relation(CAT_REC), bad)
    assert v.depth == 29 and v.first_failure == 29


@pytest.mark.parametrize("kind", ["rec", "alg", "ode"])
def test_honesty_no_relation_for_noise(kind):
    import random
    rng = random.Random(3)
    noise = [rng.randint(-10**6, 10**6) for _ in range(40)]
    fn = {"rec": guess_recurrence, "alg": guess_algebraic, "ode": guess_ode}[kind]
    rep = fn(noise, 3, 3)
    assert rep.status == GuessReport.NO_FIT and rep.relation is None


def test_corruption_in_held_out_window_is_caught():
    terms = list(CATALAN[:30])
    terms[25] += 1
    rep = guess_recurrence(terms, 2, 2)
    if rep.verified:
        assert verification_details(rep.relation, terms).full


# -- sweep order and minimality -------------------------------------------------

def test_sweep_order():
    shapes = sweep_shapes(3, 3)
    assert shapes[:4] == [(1, 0), (2, 0), (1, 1), (3, 0)]
    keys = [((r + 1) * (d + 1), r, d) for r, d in shapes]
    assert keys == sorted(keys)


SEQS = {
    "catalan": CATALAN[:40],
    "motzkin-like": enumerate_dp(StepSet.of(-1, 0, 1), ReturnToOrigin, 40).values,
    "any-1-2": enumerate_dp(StepSet.of(-1, 2), ReturnToOrigin, 120).values[::3],
    "central-binomial": [factorial(2 * n) // factorial(n) ** 2 for n in range(40)],
}


@pytest.mark.parametrize("name", sorted(SEQS))
@pytest.mark.parametrize("kind", ["rec", "alg", "ode"])
def test_monotone_sweep_equals_naive_sweep(name, kind):
    fn = {"rec": guess_recurrence, "alg": guess_algebraic, "ode": guess_ode}[kind]
    fast = fn(SEQS[name], 3, 4)
    slow = fn(SEQS[name], 3, 4, GuessConfig(strategy="naive"))
    assert fast.status == slow.status
    assert fast.shape == slow.shape
    assert fast.relation == slow.relation


# -- canonical form under scaling -------------------------------------------------

@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=30).filter(lambda q: q != 0))
def test_scaling_canonicality(k):
    base = CATALAN[:30]
    scaled = [k * c for c in base]
    assert guess_recurrence(scaled, 3, 3) == guess_recurrence(base, 3, 3)
    assert guess_ode(scaled, 3, 3).relation == guess_ode(base, 3, 3).relation


def test_canonical_relations_ignore_scaling():
    a = Recurrence([P(-2, -4), P(2, 1)])
    b = Recurrence([P(Fraction(2, 3), Fraction(4, 3)), P(Fraction(-2, 3), Fraction(-1, 3))])
    assert a == b and str(a) == str(b) == CAT_REC
    assert Recurrence(a.coeffs) == a


def test_zero_relation_rejected():
    with pytest.raises(TrivialRelation):
        Recurrence([P(), P()])
    with pytest.raises(TrivialRelation):
        AlgebraicRelation([P(1, var="t")])


# -- grammar ----------------------------------------------------------------------

def test_grammar_formats():
    assert str(parse_relation(CAT_REC)) == CAT_REC
    assert str(parse_relation(CAT_ALG)) == CAT_ALG
    assert str(parse_relation("(1)*C^2*t + (-1)*C + (1) = 0")) == CAT_ALG
    ode = "(4*t^3 - t)*D^2[C] + (16*t^2 - 3)*D[C] + (8*t)*C = 0"
    assert str(parse_relation(ode)) == ode
    assert isinstance(parse_relation(ode), DifferentialRelation)


def test_grammar_errors():
    with pytest.raises(TrivialRelation):
        parse_relation("C - C = 0")
    with pytest.raises(RelationSyntaxError) as e:
        parse_relation("(n + 2)*a(n+1) + (-4*n - 2*a(n) = 0")
    assert e.value.pos is not None and "column" in str(e.value)
    with pytest.raises(RelationSyntaxError):
        parse_relation("(t)*a(n+1) + (1)*a(n) = 0")
    with pytest.raises(RelationSyntaxError):
        parse_relation("(t)*C^2*D[C] = 0")


int_polys = st.lists(st.integers(-20, 20), min_size=0, max_size=4)


@settings(max_examples=100)
@given(st.lists(int_polys, min_size=2, max_size=5), st.sampled_from(["rec", "alg", "ode"]))
def test_grammar_round_trip(coeff_lists, kind):
    var = "n" if kind == "rec" else "t"
    cls = {"rec": Recurrence, "alg": AlgebraicRelation, "ode": DifferentialRelation}[kind]
    try:
        rel = cls([UniPoly(c, var) for c in coeff_lists])
    except TrivialRelation:
        return
    text = format_relation(rel)
    assert parse_relation(text) == rel
    assert format_relation(parse_relation(text)) == text


# -- pipeline ---------------------------------------------------------------------

def test_pipeline_dyck():
    res = guess_pipeline(StepSet.of(-1, 1), ReturnToOrigin, Budget(max_terms=80))
    assert (res.period, res.residue) == (2, 0)
    assert format_relation(res.reports["alg"].relation) == CAT_ALG
    assert format_relation(res.reports["rec"].relation) == CAT_REC
    assert res.verified


def test_pipeline_reports_bounds_on_failure():
    res = guess_pipeline(StepSet.of(-1, -2, 3), ReturnToOrigin, Budget(max_terms=60, max_order=2, max_degree=2))
    rep = res.reports["rec"]
    assert rep.status == GuessReport.NO_FIT and rep.bounds_reached is not None


def test_pipeline_time_budget():
    res = guess_pipeline(StepSet.of(-1, -2, 3), ReturnToOrigin,
                         Budget(max_terms=300, max_order=8, max_degree=8, seconds=0.0))
    assert res.status == "resource-exceeded"
