"""Exact scalars, intervals and the pi enclosure, checked against mpmath."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtprove.numeric import (
    PiPolynomial,
    PrecisionExhausted,
    RationalInterval,
    Sign,
    fraction_str,
    pi_enclosure,
    round_directed,
    sign_of,
)

mpmath.mp.dps = 60
PI = mpmath.pi


def mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
pi_polys = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=60), min_size=0, max_size=4).map(PiPolynomial)


def test_pi_enclosure_contains_pi_and_is_narrow():
    with mpmath.workdps(400):
        for bits in (2, 20, 64, 200, 1000):
            iv = pi_enclosure(bits)
            assert mp(iv.lo) < mpmath.pi < mp(iv.hi)
            assert iv.width <= Fraction(1, 2**bits)


def test_pi_enclosure_two_bits_is_a_quarter_grid_box():
    iv = pi_enclosure(2)
    assert iv.lo <= Fraction(25, 8) and iv.hi >= Fraction(51, 16)
    assert iv.lo < Fraction(314159265358979, 10**14) and Fraction(314159265358980, 10**14) < iv.hi


def test_pi_enclosures_nest():
    prev = pi_enclosure(1)
    for bits in range(2, 300, 7):
        cur = pi_enclosure(bits)
        assert prev.lo <= cur.lo and cur.hi <= prev.hi
        prev = cur


def test_pi_beyond_cap():
    with pytest.raises(PrecisionExhausted):
        pi_enclosure(5000)


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ([-3, 1], Sign.POSITIVE),
        ([], Sign.ZERO),
        ([Fraction(355, 113), -1], Sign.POSITIVE),
        ([-10, 0, 1], Sign.NEGATIVE),
    ],
)
def test_sign_of_examples(coeffs, expected):
    assert sign_of(PiPolynomial(coeffs)) == expected


@given(pi_polys, pi_polys)
def test_sign_of_is_multiplicative(p, q):
    assert sign_of(p * q) == sign_of(p) * sign_of(q)
    assert sign_of(-p) == -sign_of(p)


@given(pi_polys)
def test_sign_of_agrees_with_mpmath(p):
    v = sum(mp(c) * PI**i for i, c in enumerate(p.coefficients))
    s = sign_of(p)
    if p.is_zero():
        assert s == Sign.ZERO
    else:
        assert s == (Sign.POSITIVE if v > 0 else Sign.NEGATIVE)


def test_round_directed_case1_examples():
    pi = PiPolynomial.pi()
    x8 = (pi - 3) * Fraction(1, 1260)
    r = round_directed(x8, "lower", Fraction(1, 10**6))
    exact = (PI - 3) / 1260
    assert mp(r) <= exact < mp(r) + mpmath.mpf(10) ** -6
    # the hand-picked 7/62500 lies below the exact value and within the same gap
    assert mp(Fraction(7, 62500)) <= exact < mp(Fraction(7, 62500)) + mpmath.mpf(10) ** -6

    x7 = -pi * (pi - 2) * Fraction(1, 1680)
    r7 = round_directed(x7, "lower", Fraction(1, 10**5))
    e7 = -PI * (PI - 2) / 1680
    assert mp(r7) <= e7 < mp(r7) + mpmath.mpf(10) ** -5
    assert mp(Fraction(-107, 50000)) <= e7

    assert round_directed(PiPolynomial([5]), "lower", Fraction(1, 3)) == 5


@settings(max_examples=60)
@given(pi_polys, st.integers(min_value=1, max_value=12))
def test_round_directed_brackets(p, digits):
    gap = Fraction(1, 10**digits)
    lo = round_directed(p, "lower", gap)
    hi = round_directed(p, "upper", gap)
    v = sum(mp(c) * PI**i for i, c in enumerate(p.coefficients))
    assert mp(lo) <= v <= mp(hi)
    assert v - mp(lo) < mp(gap) and mp(hi) - v < mp(gap)


def test_round_directed_rejects_bad_arguments():
    with pytest.raises(ValueError):
        round_directed(PiPolynomial.pi(), "sideways", Fraction(1, 10))
    with pytest.raises(ValueError):
        round_directed(PiPolynomial.pi(), "lower", 0)


@given(rationals, rationals, rationals, rationals, rationals)
def test_interval_arithmetic_contains_exact(a, b, c, d, t):
    x = RationalInterval(min(a, b), max(a, b))
    y = RationalInterval(min(c, d), max(c, d))
    px = x.lo + (x.hi - x.lo) * Fraction(1, 3)
    py = y.lo + (y.hi - y.lo) * Fraction(2, 7)
    assert (x + y).contains(px + py)
    assert (x - y).contains(px - py)
    assert (x * y).contains(px * py)
    assert (x**3).contains(px**3)
    assert (x**2).contains(px**2)
    if not y.contains(0):
        assert (x / y).contains(px / py)


@given(pi_polys, rationals)
def test_pi_polynomial_evaluation_contains_value(p, shift):
    q = p * PiPolynomial([shift, 1])
    v = sum(mp(c) * PI**i for i, c in enumerate(q.coefficients))
    enc = q.enclosure(80)
    assert mp(enc.lo) - mpmath.mpf(10) ** -40 <= v <= mp(enc.hi) + mpmath.mpf(10) ** -40


def test_interval_validation_and_helpers():
    with pytest.raises(ValueError):
        RationalInterval(2, 1)
    iv = RationalInterval(Fraction(-1, 3), Fraction(1, 2))
    assert iv.sign() is None
    assert RationalInterval(1, 2).sign() == Sign.POSITIVE
    assert iv.abs() == RationalInterval(0, Fraction(1, 2))
    out = iv.round_out(4)
    assert out.lo <= iv.lo and out.hi >= iv.hi
    assert fraction_str(Fraction(3)) == "3/1"
