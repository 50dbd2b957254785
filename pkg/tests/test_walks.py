from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from walkguess.arith import coeff_slice, substitute
from walkguess.walks import (
    AnyEndpoint,
    EndpointSlice,
    ReturnToOrigin,
    StepSet,
    StepSetError,
    enumerate_dp,
    functional_residual,
    iterate_quadratic_map,
    parse_steps_arg,
    probability_table,
    quadratic_map,
    series_iterate_1d,
    series_iterate_2d,
    series_view,
    stepset_from_text,
    stepset_to_text,
)

CORPUS_1D = [StepSet.of(*s) for s in ([-1, 1], [-1, 2], [-2, 1], [-1, -2, 3], [-1, 1, 2])]
KING_LESS = StepSet.of((1, 0), (-1, 0), (0, 1), (0, -1))
CORPUS_2D = [
    KING_LESS,
    StepSet.of((1, 1), (-1, 0), (0, -1)),
    StepSet.of((1, 0), (0, 1), (-1, -1), (1, 1)),
]


def brute_force(s, N, end=None):
    """Count walks by listing every step sequence; ``end`` None means any."""
    out = []
    for n in range(N + 1):
        total = Fraction(0)
        for seq in product(range(len(s.steps)), repeat=n):
            pos = [0] * s.dim
            weight = Fraction(1)
            ok = True
            for k in seq:
                pos = [a + b for a, b in zip(pos, s.steps[k])]
                weight *= s.weight_list()[k]
                if min(pos) < 0:
                    ok = False
                    break
            if ok and (end is None or tuple(pos) == end):
                total += weight
        out.append(total)
    return out


def test_dp_examples():
    assert enumerate_dp(StepSet.of(-1, 1), ReturnToOrigin, 6).values == [1, 0, 1, 0, 2, 0, 5]
    assert enumerate_dp(StepSet.of(-1, 1), AnyEndpoint, 6).values == [1, 1, 2, 3, 6, 10, 20]
    for s in CORPUS_1D + CORPUS_2D:
        assert enumerate_dp(s, ReturnToOrigin, 0).values == [1]


def test_dp_aerated_catalan_to_12():
    assert enumerate_dp(StepSet.of(-1, 1), ReturnToOrigin, 12).values == [1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42, 0, 132]


@pytest.mark.parametrize("s", CORPUS_1D + CORPUS_2D[:2], ids=str)
def test_dp_matches_brute_force(s):
    N = 7 if s.dim == 1 and len(s.steps) <= 3 else 5
    origin = (0,) * s.dim
    assert enumerate_dp(s, ReturnToOrigin, N).values == brute_force(s, N, origin)
    assert enumerate_dp(s, AnyEndpoint, N).values == brute_force(s, N)
    target = (1,) * s.dim
    assert enumerate_dp(s, EndpointSlice(*target), N).values == brute_force(s, N, target)


def test_dp_three_dimensions_matches_brute_force():
    s = StepSet.of((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1))
    assert enumerate_dp(s, ReturnToOrigin, 6).values == brute_force(s, 6, (0, 0, 0))


def test_dp_state_cap():
    from walkguess.walks import ResourceExceeded
    with pytest.raises(ResourceExceeded):
        enumerate_dp(KING_LESS, AnyEndpoint, 40, max_states=50)


def test_sum_rule():
    for s in CORPUS_1D + CORPUS_2D:
        vals = enumerate_dp(s, AnyEndpoint, 8).values
        free = all(min(v) >= 0 for v in s.steps)
        for n, v in enumerate(vals):
            assert v <= len(s.steps) ** n
            if n > 0:
                assert (v == len(s.steps) ** n) == free
    up = StepSet.of(1, 2)
    assert enumerate_dp(up, AnyEndpoint, 6).values == [2**n for n in range(7)]


def test_monotone_truncation():
    s = StepSet.of(-1, -2, 3)
    short = enumerate_dp(s, AnyEndpoint, 20).values
    assert enumerate_dp(s, AnyEndpoint, 40).values[:21] == short


def test_parity_support():
    vals = enumerate_dp(StepSet.of(-1, 1), ReturnToOrigin, 30).values
    assert all(v == 0 for v in vals[1::2])
    vals = enumerate_dp(StepSet.of(-1, 2), ReturnToOrigin, 30).values
    assert [n for n, v in enumerate(vals) if v] == list(range(0, 31, 3))


# -- functional equation --------------------------------------------------------

@pytest.mark.parametrize("s", CORPUS_1D, ids=str)
def test_series_1d_matches_dp_in_every_mode(s):
    N = 25
    F = series_iterate_1d(s, N)
    assert series_view(F, ReturnToOrigin) == enumerate_dp(s, ReturnToOrigin, N).values
    assert series_view(F, AnyEndpoint) == enumerate_dp(s, AnyEndpoint, N).values
    for k in (1, 2, 3):
        assert series_view(F, EndpointSlice(k)) == enumerate_dp(s, EndpointSlice(k), N).values


@pytest.mark.parametrize("s", CORPUS_2D, ids=str)
def test_series_2d_matches_dp(s):
    N = 16
    F = series_iterate_2d(s, N)
    for mode in (ReturnToOrigin, AnyEndpoint, EndpointSlice(1, 0), EndpointSlice(0, 2), EndpointSlice(2, 1)):
        assert series_view(F, mode) == enumerate_dp(s, mode, N).values


def test_series_1d_examples():
    F = series_iterate_1d(StepSet.of(-1, 1), 5)
    assert F.coeff(5).coeff("x", 1).value() == brute_force(StepSet.of(-1, 1), 5, (1,))[5] == 5
    assert series_iterate_1d(StepSet.of(-1, 1), 0).coeff(0) == F.coeff(0)
    with pytest.raises(ValueError):
        series_iterate_1d(KING_LESS, 3)


def test_series_2d_examples():
    F = series_iterate_2d(KING_LESS, 3)
    assert F.coeff(2).coeff("x", 0).coeff("x", 0).value() == 2
    assert F.coeff(0).total() == 1
    legal_first = sum(1 for v in KING_LESS.steps if min(v) >= 0)
    assert F.coeff(1).total() == legal_first
    with pytest.raises(ValueError):
        series_iterate_2d(StepSet.of(-1, 1), 3)


def test_functional_residual_vanishes_on_the_solution():
    for s in CORPUS_1D:
        assert functional_residual(s, series_iterate_1d(s, 15)).is_zero()


# -- the quadratic map ------------------------------------------------------------

def test_quadratic_map_examples():
    G = iterate_quadratic_map(6)
    assert coeff_slice(G, "x", 0).terms() == [1, 0, 1, 0, 2, 0, 5]
    assert iterate_quadratic_map(0).order == 0


def test_quadratic_map_equals_walk_series():
    N = 30
    G = iterate_quadratic_map(N)
    assert G == series_iterate_1d(StepSet.of(-1, 1), N)
    assert functional_residual(StepSet.of(-1, 1), G).is_zero()
    # and G is a fixed point of one more application, to its order
    assert quadratic_map(G).truncate(N) == G


def test_x_zero_specialization_two_ways():
    G = iterate_quadratic_map(12)
    assert substitute(G, "x", 0) == coeff_slice(G, "x", 0)


# -- probabilities ------------------------------------------------------------

FAIR = StepSet.of(-1, 1, weights=(Fraction(1, 2), Fraction(1, 2)))


def test_probability_examples():
    t = probability_table(FAIR, ReturnToOrigin, 6)
    assert t.values[0] == 1
    assert t.values[6] == Fraction(5, 64)
    assert t.values[6] / Fraction(20, 64) == Fraction(1, 4)
    loaded = StepSet.of(-1, 1, weights=(Fraction(1, 3), Fraction(2, 3)))
    assert probability_table(loaded, ReturnToOrigin, 2).values[2] == Fraction(2, 9)


def test_probability_break_even_law():
    from walkguess.sequences import binomial_coefficient
    t = probability_table(FAIR, ReturnToOrigin, 100)
    for n in range(51):
        assert t.values[2 * n] / (Fraction(binomial_coefficient(2 * n, n)) / 4**n) == Fraction(1, n + 1)


def test_probability_normalizes_with_warning():
    s = StepSet.of(-1, 1, weights=(1, 3))
    with pytest.warns(UserWarning):
        t = probability_table(s, ReturnToOrigin, 2)
    assert t.normalized
    assert t.values[2] == Fraction(3, 16)


def test_uniform_weights_match_counts():
    for s in CORPUS_1D[:3]:
        k = len(s.steps)
        w = StepSet(s.dim, s.steps, (Fraction(1, k),) * k)
        counts = enumerate_dp(s, AnyEndpoint, 10).values
        assert probability_table(w, AnyEndpoint, 10).values == [Fraction(c, k**n) for n, c in enumerate(counts)]
        ones = StepSet(s.dim, s.steps, (1,) * k)
        assert enumerate_dp(ones, AnyEndpoint, 10).values == counts


def test_nonpositive_weight_rejected():
    with pytest.raises(StepSetError):
        StepSet.of(-1, 1, weights=(0, 1))
    with pytest.raises(StepSetError):
        StepSet.of(-1, 1, weights=(0.5, 0.5))


# -- step-set documents -------------------------------------------------------

def test_stepset_validation():
    with pytest.raises(StepSetError):
        StepSet.of(1, 1)
    with pytest.raises(StepSetError):
        StepSet(2, ((1, 0), (1,)))
    with pytest.raises(StepSetError):
        StepSet(4, ((1, 0, 0, 0),))


steps_1d = st.lists(st.integers(-4, 4), min_size=1, max_size=5, unique=True)


@settings(max_examples=60)
@given(steps_1d, st.booleans())
def test_stepset_text_round_trip(steps, weighted):
    weights = tuple(Fraction(i + 1, 7) for i in range(len(steps))) if weighted else None
    s = StepSet.of(*steps, weights=weights)
    text = stepset_to_text(s)
    assert stepset_from_text(text) == s
    assert stepset_to_text(stepset_from_text(text)) == text


def test_stepset_text_errors_are_positioned():
    with pytest.raises(StepSetError, match="line 1, column"):
        stepset_from_text('{"dim": 1, "steps": [[1], [-1]')
    with pytest.raises(StepSetError, match="steps\\[1\\]"):
        stepset_from_text('{"dim": 1, "steps": [[1], "x"]}')
    with pytest.raises(StepSetError, match="weights\\[0\\]"):
        stepset_from_text('{"dim": 1, "steps": [[1]], "weights": ["a/b"]}')


def test_inline_steps():
    assert parse_steps_arg("-1,-2,3") == StepSet.of(-1, -2, 3)
    assert parse_steps_arg("1:0,-1:0,0:1,0:-1") == KING_LESS
    with pytest.raises(StepSetError):
        parse_steps_arg("1,,2")
