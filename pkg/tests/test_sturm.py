"""Sturm chains, root counting and exact sign decisions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtprove.sturm import (
    STRICTLY_NEGATIVE,
    STRICTLY_POSITIVE,
    PositivityVerdict,
    count_roots,
    evaluate,
    mul,
    neg,
    prove_sign,
    recheck_verdict,
    sturm_chain,
)

f = Fraction
CASE1_DIRECT = [0, 0, 0, 0, f(943, 10000), f(-299, 5000), f(-59, 12500), f(-107, 50000), f(7, 62500)]
CASE1_REFLECTED = [0, f(163, 500), f(-783, 1000), f(-71, 250)]


def brute_force_roots(p, a, b, n=4000):
    """Sign-change scan: counts simple roots separated by more than the grid step."""
    xs = [a + (b - a) * f(k, n) for k in range(n + 1)]
    vals = [evaluate(p, x) for x in xs]
    count = sum(1 for u, v in zip(vals, vals[1:]) if u != 0 and (v == 0 or (u > 0) != (v > 0)))
    return count


def test_chain_examples():
    assert sturm_chain([-2, 0, 1]).polys[:2] == ((-2, 0, 1), (0, 2))
    assert len(sturm_chain([-2, 0, 1]).polys[-1]) == 1
    c = sturm_chain([1, 0, 1])
    assert len(c.polys[-1]) == 1
    assert c.variations(f(-3)) - c.variations(f(5)) == 0
    c2 = sturm_chain(mul([-1, 1], [-2, 1]))
    assert c2.variations(f(0)) - c2.variations(f(3)) == 2
    with pytest.raises(ValueError):
        sturm_chain([])


def test_count_roots_examples():
    assert count_roots([-2, 0, 1], 0, 2) == 1
    assert brute_force_roots((f(-2), f(0), f(1)), f(0), f(2)) == 1
    assert count_roots(mul([-1, 1], [-2, 1]), 0, 3) == 2
    assert count_roots([1, 0, 1], -10, 10) == 0
    # half-open: root at the right end counts, at the left end does not
    assert count_roots([-1, 1], 0, 1) == 1
    assert count_roots([-1, 1], 1, 2) == 0
    with pytest.raises(ValueError):
        count_roots([-1, 1], 2, 1)


roots_st = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=8), min_size=1, max_size=6)


@settings(max_examples=80, deadline=None)
@given(roots_st, st.integers(min_value=0, max_value=2), st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_count_roots_matches_planted_roots(roots, extra, a):
    p = (f(1),)
    for r in roots:
        p = mul(p, (-r, f(1)))
    for _ in range(extra):  # irreducible factor, adds no real roots
        p = mul(p, (f(1), f(0), f(1)))
    b = a + f(3)
    assert count_roots(p, a, b) == len({r for r in roots if a < r <= b})


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=5, unique=True))
def test_count_roots_agrees_with_scan(roots):
    p = (f(1),)
    for r in roots:
        p = mul(p, (-r, f(1)))
    # grid step 1/400 resolves roots spaced at least 1/4 apart
    a, b = f(-7, 2) + f(1, 997), f(7, 2)
    assert count_roots(p, a, b) == brute_force_roots(p, a, b)


def test_case1_direct_minorant_is_positive():
    v = prove_sign(CASE1_DIRECT, 0, f(27, 20), STRICTLY_POSITIVE)
    assert v.proved and v.factored_zero_multiplicity == 4
    assert recheck_verdict(CASE1_DIRECT, v)


def test_case1_reflected_minorant_is_positive():
    v = prove_sign(CASE1_REFLECTED, 0, f(9, 25), STRICTLY_POSITIVE)
    assert v.proved and v.factored_zero_multiplicity == 1


def test_x_squared_on_symmetric_interval_is_refuted():
    v = prove_sign([0, 0, 1], -1, 1, STRICTLY_POSITIVE, right_closed=False)
    assert v.outcome == "refuted"


def test_zero_at_closed_endpoint():
    p = [-1, 1]
    assert prove_sign(p, f(-1), 1, STRICTLY_NEGATIVE, right_closed=True).outcome == "zero-at-endpoint"
    assert prove_sign(p, f(-1), 1, STRICTLY_NEGATIVE, right_closed=False).proved


def test_prove_sign_errors():
    with pytest.raises(ValueError):
        prove_sign([], 0, 1)
    with pytest.raises(ValueError):
        prove_sign([1], 1, 0)
    with pytest.raises(ValueError):
        prove_sign([1], 0, 1, "nonnegative")


def test_verdict_dict_round_trip():
    v = prove_sign(CASE1_DIRECT, 0, f(27, 20))
    assert PositivityVerdict.from_dict(v.to_dict()) == v
    tampered = v.to_dict()
    tampered["witness"]["root_count"] = 3
    assert not recheck_verdict(CASE1_DIRECT, PositivityVerdict.from_dict(tampered))


poly_st = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=1, max_size=7).filter(
    lambda c: any(c)
)
interval_st = st.tuples(
    st.fractions(min_value=0, max_value=2, max_denominator=9), st.fractions(min_value=f(1, 9), max_value=2, max_denominator=9)
)


@settings(max_examples=80, deadline=None)
@given(poly_st, interval_st)
def test_proved_implies_positive_on_grid(p, iv):
    lo, width = iv
    hi = lo + width
    v = prove_sign(p, lo, hi, STRICTLY_POSITIVE)
    if v.proved:
        for k in range(1, 101):
            assert evaluate(tuple(p), lo + (hi - lo) * f(k, 100)) > 0


@settings(max_examples=80, deadline=None)
@given(poly_st, interval_st, st.booleans())
def test_negation_swaps_relation(p, iv, closed):
    lo, width = iv
    hi = lo + width
    pos = prove_sign(p, lo, hi, STRICTLY_POSITIVE, closed)
    negv = prove_sign(neg(tuple(f(c) for c in p)), lo, hi, STRICTLY_NEGATIVE, closed)
    assert pos.outcome == negv.outcome


@settings(max_examples=60, deadline=None)
@given(poly_st, interval_st, st.sampled_from([STRICTLY_POSITIVE, STRICTLY_NEGATIVE]))
def test_squaring_keeps_root_set(p, iv, rel):
    lo, width = iv
    hi = lo + width
    q = tuple(f(c) for c in p)
    assert count_roots(q, lo, hi) == count_roots(mul(q, q), lo, hi)
    a = prove_sign(q, lo, hi, STRICTLY_POSITIVE).outcome
    b = prove_sign(mul(q, q), lo, hi, STRICTLY_POSITIVE).outcome
    # p > 0 on I implies p^2 > 0; and p^2 has a root on I exactly when p does
    if a == "proved":
        assert b == "proved"
    assert (a == "zero-at-endpoint") == (b == "zero-at-endpoint")
