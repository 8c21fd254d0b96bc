"""End-to-end proofs: the four cases, the theorem reductions and failure modes."""

import time
from fractions import Fraction

import mpmath
import pytest

from mtprove.corpus import CASE_RELATION, CASE_TEXT, HALF_PI, REDUCTIONS, InequalityProblem, build_case, reduce_bound_to_mtp, reduction_matches
from mtprove.expr import normalize, parse
from mtprove.prover import Disproved, GaveUp, ProverConfig, prove
from mtprove.sturm import STRICTLY_NEGATIVE, STRICTLY_POSITIVE

mpmath.mp.dps = 40


def mp_eval(e, x):
    total = mpmath.mpf(0)
    for t in e.terms:
        c = mpmath.mpf(0)
        for i, pc in enumerate(t.coeff.coefficients):
            c += sum(mpmath.mpf(a.numerator) / a.denominator * mpmath.pi**j for j, a in enumerate(pc.coefficients)) * x**i
        total += c * mpmath.sin(x) ** t.sin_pow * mpmath.cos(x) ** t.cos_pow
    return total


@pytest.fixture(scope="module")
def certs():
    return {c: prove(build_case(c)) for c in sorted(CASE_TEXT)}


def test_build_case_examples():
    f1 = build_case("f1")
    assert f1.relation == STRICTLY_POSITIVE and f1.hi == HALF_PI
    assert set(f1.expr.keys()) == {(1, 0), (0, 1), (0, 0)}
    f2 = build_case("f2")
    assert f2.relation == STRICTLY_NEGATIVE and (0, 2) in f2.expr.keys()
    tail = parse("-2*pi^3*x + 8*pi*x^3 + 8*pi^2*x - 24*x^3 - 24*x")
    assert f2.expr.coefficient(0, 0) == tail.coefficient(0, 0)
    f4 = build_case("f4")
    assert f4.relation == STRICTLY_NEGATIVE and {(1, 1), (0, 2)} <= set(f4.expr.keys())
    assert CASE_RELATION["f3"] == STRICTLY_POSITIVE


@pytest.mark.parametrize("key", sorted(REDUCTIONS))
def test_reductions_match_cases(key):
    assert reduction_matches(*key)


def test_case1_certificate_shape(certs):
    c = certs["f1"]
    assert len(c.pieces) == 2
    direct, refl = c.pieces
    assert (direct.reflected, direct.lo, direct.hi) == (False, 0, Fraction(27, 20))
    assert direct.taylor_degrees == {"sin": 7, "cos": 4}
    assert (refl.reflected, refl.lo, refl.hi) == (True, 0, Fraction(9, 25))
    assert refl.taylor_degrees == {"cos": 2, "sin": 1}
    assert direct.verdict.factored_zero_multiplicity == 4
    assert refl.verdict.factored_zero_multiplicity == 1
    assert c.coverage["covered"]


@pytest.mark.parametrize("case", ["f1", "f2", "f3", "f4"])
def test_every_piece_is_proved(certs, case):
    c = certs[case]
    assert c.pieces and all(p.verdict.proved for p in c.pieces)
    assert c.coverage["covered"]


@pytest.mark.parametrize("case", ["f1", "f2", "f3", "f4"])
def test_soundness_by_dense_sampling(certs, case):
    c = certs[case]
    e = c.problem.expr
    want = 1 if c.problem.relation == STRICTLY_POSITIVE else -1
    n = 800
    for k in range(1, n):
        x = mpmath.pi / 2 * k / n
        assert mpmath.sign(mp_eval(e, x)) == want, (case, x)


@pytest.mark.parametrize("key", sorted(REDUCTIONS))
def test_reductions_prove(key):
    cert = prove(reduce_bound_to_mtp(*key))
    assert all(p.verdict.proved for p in cert.pieces)


def test_simple_inequality_proves():
    cert = prove(InequalityProblem(parse("x - sin(x)"), STRICTLY_POSITIVE, 0, HALF_PI))
    assert cert.coverage["covered"]


def test_false_inequality_is_disproved():
    with pytest.raises(Disproved) as info:
        prove(InequalityProblem(parse("x - sin(x)"), STRICTLY_NEGATIVE, 0, Fraction(1)))
    exc = info.value
    assert 0 < exc.point < 1 and exc.enclosure.lo > 0


def test_tiny_budget_gives_up_not_disproves():
    problem = build_case("f2")
    with pytest.raises(GaveUp):
        prove(problem, ProverConfig(max_taylor_degree=1, max_pieces=3))


def test_rational_interval_problem():
    p = InequalityProblem(parse("cos(x) - 1 + (1/2)*x^2"), STRICTLY_POSITIVE, Fraction(1, 10), Fraction(1))
    cert = prove(p)
    assert len(cert.pieces) == 1 and not cert.pieces[0].right_closed


def test_problem_validation():
    with pytest.raises(ValueError):
        InequalityProblem(parse("x"), STRICTLY_POSITIVE, Fraction(1), Fraction(1, 2))
    with pytest.raises(ValueError):
        InequalityProblem(parse("x"), STRICTLY_POSITIVE, 0, Fraction(3))
    with pytest.raises(ValueError):
        InequalityProblem(parse("x"), "maybe", 0, HALF_PI)
    with pytest.raises(ValueError):
        ProverConfig(max_taylor_degree=0)
    with pytest.raises(ValueError):
        ProverConfig(rationalization_gap=0)


@pytest.mark.parametrize("case", ["f1", "f4"])
def test_determinism(certs, case):
    again = prove(build_case(case))
    assert again.to_json() == certs[case].to_json()


def test_higher_cap_never_needs_more_pieces():
    for case in ("f1", "f3"):
        n = len(prove(build_case(case), ProverConfig(max_taylor_degree=12)).pieces)
        assert len(prove(build_case(case), ProverConfig(max_taylor_degree=20)).pieces) <= n


def test_auto_bisect_schedule():
    cert = prove(build_case("f1"), ProverConfig(split_schedule="auto-bisect"))
    assert cert.coverage["covered"]


def test_case1_is_fast():
    t0 = time.perf_counter()
    prove(build_case("f1"))
    assert time.perf_counter() - t0 < 5


def test_negated_problem_equivalence():
    # f2 < 0 is the same statement as -f2 > 0
    p = build_case("f2")
    neg = InequalityProblem(normalize(-p.expr), STRICTLY_POSITIVE, p.lo, p.hi)
    a, b = prove(p), prove(neg)
    assert [x.rationalized_poly for x in a.pieces] == [x.rationalized_poly for x in b.pieces]
