"""Certified sinc bounds, their hierarchy, error curves and the Bernoulli series."""

import csv
import io
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtprove.bounds import (
    BOUND_KINDS,
    SERIES_IDS,
    BoundSpec,
    alpha_enclosure,
    bound_error_scan,
    endpoint_gaps,
    eval_bound,
    eval_series,
    eval_series_direct,
    eval_sinc,
    exp_interval,
    grid_points,
    hierarchy_at,
    hierarchy_check,
    ln_interval,
    sandwich_at,
    write_figures,
)
from mtprove.numeric import RationalInterval, half_pi_enclosure

mpmath.mp.dps = 50


def mp(q):
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def oracle(kind, x):
    """Closed forms evaluated in mpmath."""
    x = mpmath.mpf(x)
    s, c, pi = mpmath.sin(x), mpmath.cos(x), mpmath.pi
    a = mpmath.mpf(2) / 3 - 2 / pi
    cusa = (2 + c) / 3
    phi1 = (x - s) / (pi / 2 - 1)
    psi1 = s - x * c
    ups = {"t1_lower": phi1, "t1_upper": phi1**2, "t2_lower": psi1, "t2_upper": psi1**2,
           "best_lower": phi1, "best_upper": psi1**2}
    if kind in ("cusa", "power_cusa_one"):
        return cusa
    if kind == "power_cusa_alpha":
        return cusa ** (mpmath.log(pi / 2) / mpmath.log(mpmath.mpf(3) / 2))
    return cusa - a * ups[kind]


def test_bound_spec_validation():
    assert BoundSpec("cusa").kind == "cusa"
    with pytest.raises(ValueError):
        BoundSpec("nonsense")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BOUND_KINDS), st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(157, 100), max_denominator=1000))
def test_eval_bound_contains_oracle(kind, x):
    iv = eval_bound(kind, x, 60)
    v = oracle(kind, mp(x))
    assert mp(iv.lo) <= v <= mp(iv.hi)
    assert iv.width < Fraction(1, 2**50)


def test_eval_bound_examples():
    probe = Fraction(15707963, 10**7)
    assert abs(float(eval_bound("cusa", probe).mid) - 2 / 3) < 1e-6
    near = Fraction(1570796, 10**6)
    assert abs(float(eval_bound("t1_lower", near).mid) - 2 / mpmath.pi) < 1e-5
    v = eval_bound("t1_lower", 1)
    assert abs(float(v.mid) - 0.838423) < 1e-6
    assert v.hi < eval_sinc(1).lo
    assert eval_bound("power_cusa_alpha", 1).hi < eval_sinc(1).lo
    with pytest.raises(ValueError):
        eval_bound("cusa", 2)
    with pytest.raises(ValueError):
        eval_bound("cusa", 0)


def test_alpha_ln_exp_against_oracle():
    a = alpha_enclosure(80)
    exact = mpmath.log(mpmath.pi / 2) / mpmath.log(mpmath.mpf(3) / 2)
    assert mp(a.lo) <= exact <= mp(a.hi) and a.width < Fraction(1, 2**70)
    assert abs(float(a.mid) - 1.11374) < 1e-5
    for q in (Fraction(1, 7), Fraction(2, 3), Fraction(5, 2), Fraction(100)):
        ln = ln_interval(RationalInterval(q), 80)
        assert mp(ln.lo) <= mpmath.log(mp(q)) <= mp(ln.hi)
    for q in (Fraction(-3), Fraction(1, 9), Fraction(7, 2)):
        ex = exp_interval(RationalInterval(q), 80)
        assert mp(ex.lo) <= mpmath.exp(mp(q)) <= mp(ex.hi)


def test_grid_points():
    g = grid_points(5)
    assert g[0] == Fraction(1, 10**4) and len(g) == 5
    assert g[-1] < half_pi_enclosure(64).lo
    assert g == sorted(g)
    with pytest.raises(ValueError):
        grid_points(1)


def test_hierarchy_single_point_oracle():
    x = Fraction(785398, 10**6)  # close to pi/4
    phi1 = (mp(x) - mpmath.sin(mp(x))) / (mpmath.pi / 2 - 1)
    psi1 = mpmath.sin(mp(x)) - mp(x) * mpmath.cos(mp(x))
    # oracle gives Phi1(pi/4) = 0.13716, Psi1(pi/4) = 0.15175
    assert abs(phi1 - 0.13716) < 1e-4 and abs(psi1 - 0.1517) < 1e-4
    assert phi1 < psi1
    assert hierarchy_at(x, 60) is True


def test_hierarchy_check_small_grid():
    assert hierarchy_check(200, 60)


def test_error_scan_properties():
    t1 = bound_error_scan("t1_lower", 128)
    t2 = bound_error_scan("t2_lower", 128)
    for (x1, e1), (x2, e2) in zip(t1.rows, t2.rows):
        assert x1 == x2
        assert e1.hi <= 0 and e2.hi <= e1.lo
    assert Fraction(3, 1000) <= t2.max_abs_error.lo and t2.max_abs_error.hi <= Fraction(5, 1000)
    text = t1.csv_text()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "err"] and len(rows) == 129


def test_write_figures(tmp_path):
    scans = write_figures(str(tmp_path), grid_size=32)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["figure1_t1_lower.csv", "figure1_t2_lower.csv", "figure2_t1_upper.csv", "figure2_t2_upper.csv"]
    assert set(scans) == {"t1_lower", "t2_lower", "t1_upper", "t2_upper"}


@pytest.mark.parametrize("x", [Fraction(1, 10**3), Fraction(1, 3), Fraction(1), Fraction(3, 2), Fraction(1570, 1000)])
def test_sandwich_points(x):
    assert sandwich_at(x, 60) is True


def test_refines_cusa():
    for x in grid_points(64):
        c = eval_bound("cusa", x)
        assert eval_bound("t1_lower", x).hi <= c.hi
        assert eval_bound("t2_lower", x).hi <= c.hi


def test_endpoint_sharpness():
    gaps = endpoint_gaps()
    assert set(gaps) == {"t1_lower", "t1_upper", "t2_lower", "t2_upper"}
    assert all(g < Fraction(1, 10**6) for g in gaps.values())


# --- series -------------------------------------------------------------------


@pytest.mark.parametrize("series", SERIES_IDS)
@pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(1), Fraction(3, 2)])
def test_series_converge_to_closed_form(series, x):
    s = eval_series(series, x, 40, 80)
    d = eval_series_direct(series, x, 80)
    assert abs(s.mid - d.mid) < Fraction(1, 10**12)


def test_series_against_mpmath():
    x = mpmath.mpf(1)
    assert abs(mp(eval_series("x_over_sin_3_3", 1, 30, 80).mid) - x / mpmath.sin(x)) < 1e-12
    assert abs(mp(eval_series("x_over_sin_sq_3_4", 1, 30, 80).mid) - (x / mpmath.sin(x)) ** 2) < 1e-12
    # (x/sin x)^2 = -x^2 (cot x)'
    assert abs(-(x**2) * mpmath.diff(mpmath.cot, x) - (x / mpmath.sin(x)) ** 2) < 1e-20


def test_cot_leading_terms():
    x = Fraction(1, 100)
    assert eval_series("cot_3_1", x, 1, 80).contains(1 / x - x / 3)


@pytest.mark.parametrize("series", ["x_over_sin_3_3", "x_over_sin_sq_3_4"])
def test_partial_sums_increase(series):
    prev = None
    for K in range(1, 31):
        v = eval_series(series, Fraction(3, 2), K, 80)
        if prev is not None:
            assert v.lo > prev.hi
        prev = v


def test_series_domain():
    with pytest.raises(ValueError):
        eval_series("cot_3_1", 4, 3)
    with pytest.raises(ValueError):
        eval_series("cot_3_1", 1, 0)
