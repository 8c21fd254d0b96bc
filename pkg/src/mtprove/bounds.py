"""Certified evaluation of the sinc bounds, their hierarchy, error curves and
the Bernoulli series expansions.

Every bound has the template Z = (2 + cos x)/3 - (2/3 - 2/pi) * U(x) with
U one of Phi1, Phi2 (first family, t1_*) or Psi1, Psi2 (second family, t2_*).
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .lemmas import abs_b
from .numeric import (
    MAX_PRECISION_BITS,
    PrecisionExhausted,
    RationalInterval,
    half_pi_enclosure,
    pi_enclosure,
    precision_ladder,
)
from .taylor import cos_interval, sin_interval, sinc_interval

BOUND_KINDS = (
    "cusa",
    "power_cusa_alpha",
    "power_cusa_one",
    "t1_lower",
    "t1_upper",
    "t2_lower",
    "t2_upper",
    "best_lower",
    "best_upper",
)

SERIES_IDS = ("cot_3_1", "csc_3_2", "x_over_sin_3_3", "x_over_sin_sq_3_4", "cos_over_sinsq_3_5")

DEFAULT_DELTA = Fraction(1, 10**4)


# --- log and exp ------------------------------------------------------------


def _ln_point(q: Fraction, bits: int) -> RationalInterval:
    """ln q = 2 atanh((q - 1)/(q + 1)) for rational q > 0, with a geometric tail bound."""
    if q <= 0:
        raise ValueError("log of a non-positive number")
    # pull out powers of two so |z| <= 1/3
    m = 0
    while q > 2:
        q /= 2
        m += 1
    while q < Fraction(1, 2):
        q *= 2
        m -= 1
    z = (q - 1) / (q + 1)
    z2 = z * z
    tol = Fraction(1, 1 << (bits + 4))
    total = Fraction(0)
    power = z
    n = 0
    while True:
        total += power / (2 * n + 1)
        n += 1
        power *= z2
        tail = 2 * abs(power) / ((2 * n + 1) * (1 - z2))
        if tail < tol:
            break
    val = RationalInterval(2 * total - tail, 2 * total + tail)
    if m:
        val = val + _ln2(bits) * m
    return val.round_out(bits + 2)


@lru_cache(maxsize=64)
def _ln2(bits: int) -> RationalInterval:
    # ln 2 = 2 atanh(1/3)
    z = Fraction(1, 3)
    tol = Fraction(1, 1 << (bits + 8))
    total, power, n = Fraction(0), z, 0
    while True:
        total += power / (2 * n + 1)
        n += 1
        power *= z * z
        tail = 2 * power / ((2 * n + 1) * Fraction(8, 9))
        if tail < tol:
            break
    return RationalInterval(2 * total - tail, 2 * total + tail)


def ln_interval(x: RationalInterval, bits: int) -> RationalInterval:
    """Enclosure of ln over a positive interval (ln is increasing)."""
    if x.lo <= 0:
        raise ValueError("log of an interval reaching 0")
    return RationalInterval(_ln_point(x.lo, bits).lo, _ln_point(x.hi, bits).hi)


def _exp_point(q: Fraction, bits: int) -> RationalInterval:
    m = 0
    r = q
    while abs(r) > Fraction(1, 2):
        r /= 2
        m += 1
    tol = Fraction(1, 1 << (bits + 8 + m))
    total, term, k = Fraction(0), Fraction(1), 0
    while True:
        total += term
        k += 1
        term = term * r / k
        # for |r| <= 1/2 the tail after `term` is at most 2|term|
        if abs(term) * 2 < tol:
            break
    val = RationalInterval(total - 2 * abs(term), total + 2 * abs(term)).round_out(bits + 8 + m)
    for _ in range(m):
        val = (val * val).round_out(bits + 8 + m)
    return val.round_out(bits + 2)


def exp_interval(x: RationalInterval, bits: int) -> RationalInterval:
    return RationalInterval(_exp_point(x.lo, bits).lo, _exp_point(x.hi, bits).hi)


@lru_cache(maxsize=64)
def alpha_enclosure(bits: int) -> RationalInterval:
    """alpha = ln(pi/2) / ln(3/2)."""
    return ln_interval(half_pi_enclosure(bits + 4), bits + 4) / _ln_point(Fraction(3, 2), bits + 4)


# --- bounds -----------------------------------------------------------------


@dataclass(frozen=True)
class BoundSpec:
    kind: str

    def __post_init__(self):
        if self.kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")


class _Point:
    """Shared enclosures at one x (or a small x interval)."""

    def __init__(self, x: RationalInterval, bits: int):
        self.x = x
        self.bits = bits
        self.s = sin_interval(x, bits + 4)
        self.c = cos_interval(x, bits + 4)
        self.pi = pi_enclosure(bits + 4)
        self.sinc = sinc_interval(x, bits + 4)
        self.a = Fraction(2, 3) - 2 / self.pi
        self.cusa = (2 + self.c) / 3

    def upsilon(self, name: str) -> RationalInterval:
        if name == "phi1":
            return (self.x - self.s) / (self.pi / 2 - 1)
        if name == "phi2":
            return self.upsilon("phi1") ** 2
        if name == "psi1":
            return self.s - self.x * self.c
        if name == "psi2":
            return self.upsilon("psi1") ** 2
        raise ValueError(name)

    def bound(self, kind: str) -> RationalInterval:
        if kind in ("cusa", "power_cusa_one"):
            return self.cusa
        if kind == "power_cusa_alpha":
            alpha = alpha_enclosure(self.bits)
            return exp_interval((alpha * ln_interval(self.cusa, self.bits + 4)).round_out(self.bits + 8), self.bits + 4)
        ups = {
            "t1_lower": "phi1",
            "t1_upper": "phi2",
            "t2_lower": "psi1",
            "t2_upper": "psi2",
            "best_lower": "phi1",
            "best_upper": "psi2",
        }[kind]
        return self.cusa - self.a * self.upsilon(ups)


def _as_interval(x) -> RationalInterval:
    if isinstance(x, RationalInterval):
        return x
    return RationalInterval(Fraction(x))


def _check_domain(x: RationalInterval) -> None:
    if x.lo <= 0 or x.hi >= half_pi_enclosure(64).hi:
        if x.lo <= 0 or not x.hi < half_pi_enclosure(256).lo:
            raise ValueError(f"{x!r} is not inside (0, pi/2)")


def eval_bound(kind, x, bits: int = 60) -> RationalInterval:
    kind = kind.kind if isinstance(kind, BoundSpec) else BoundSpec(kind).kind
    x = _as_interval(x)
    _check_domain(x)
    return _Point(x, bits).bound(kind).round_out(bits + 8)


def eval_sinc(x, bits: int = 60) -> RationalInterval:
    return sinc_interval(_as_interval(x), bits + 4).round_out(bits + 8)


def grid_points(n: int, delta: Fraction = DEFAULT_DELTA) -> list[Fraction]:
    """Uniform rational grid on [delta, H - delta], H a rational just below pi/2."""
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    hi = half_pi_enclosure(64).lo - delta
    return [delta + (hi - delta) * Fraction(i, n - 1) for i in range(n)]


def _resolve(test, bits: int, cap: int = MAX_PRECISION_BITS):
    """Run test(bits) over the precision ladder until it returns True/False (not None)."""
    for b in precision_ladder(bits, cap):
        r = test(b)
        if r is not None:
            return r, b
    return None, cap


@dataclass
class HierarchyReport:
    ok: bool
    grid_size: int
    unresolved: list = field(default_factory=list)
    violations: list = field(default_factory=list)


def _less(a: RationalInterval, b: RationalInterval):
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi:
        return False
    return None


def hierarchy_at(x: Fraction, bits: int):
    """Phi1 < Psi1, t1_lower > t2_lower, t2_upper < t1_upper at one point (None = unresolved)."""
    xi = RationalInterval(x)

    def test(b):
        p = _Point(xi, b)
        checks = [
            _less(p.upsilon("phi1"), p.upsilon("psi1")),
            _less(p.bound("t2_lower"), p.bound("t1_lower")),
            _less(p.bound("t2_upper"), p.bound("t1_upper")),
        ]
        if False in checks:
            return False
        if None in checks:
            return None
        return True

    return _resolve(test, bits, 1024)[0]


def hierarchy_report(grid_size: int = 1000, bits: int = 60) -> HierarchyReport:
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    rep = HierarchyReport(True, grid_size)
    for x in grid_points(grid_size):
        r = hierarchy_at(x, bits)
        if r is None:
            rep.unresolved.append(x)
        elif not r:
            rep.violations.append(x)
    rep.ok = not rep.violations and not rep.unresolved
    return rep


def hierarchy_check(grid_size: int = 1000, bits: int = 60) -> bool:
    return hierarchy_report(grid_size, bits).ok


# --- error curves -----------------------------------------------------------


@dataclass
class ErrorScan:
    kind: str
    rows: list  # (x, RationalInterval of bound - sinc)
    max_abs_error: RationalInterval

    def csv_text(self, digits: int = 12) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "err"])
        for x, err in self.rows:
            w.writerow([f"{float(x):.{digits}g}", f"{float(err.mid):.{digits}g}"])
        return buf.getvalue()


def bound_error_scan(kind, grid_size: int = 2048, bits: int = 60) -> ErrorScan:
    kind = BoundSpec(kind).kind if not isinstance(kind, BoundSpec) else kind.kind
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    rows = []
    lo = hi = Fraction(0)
    for x in grid_points(grid_size):
        p = _Point(RationalInterval(x), bits)
        err = (p.bound(kind) - p.sinc).round_out(bits + 8)
        rows.append((x, err))
        a = err.abs()
        lo, hi = max(lo, a.lo), max(hi, a.hi)
    return ErrorScan(kind, rows, RationalInterval(lo, hi))


FIGURE_KINDS = {1: ("t1_lower", "t2_lower"), 2: ("t1_upper", "t2_upper")}


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_figures(directory: str, grid_size: int = 2048, bits: int = 60, digits: int = 12) -> dict:
    """Write figure<n>_<kind>.csv for both figures; return the scans by kind."""
    scans = {}
    for fig, kinds in FIGURE_KINDS.items():
        for kind in kinds:
            scan = bound_error_scan(kind, grid_size, bits)
            atomic_write(os.path.join(directory, f"figure{fig}_{kind}.csv"), scan.csv_text(digits))
            scans[kind] = scan
    return scans


# --- sandwich ---------------------------------------------------------------


def sandwich_at(x: Fraction, bits: int = 60):
    """t1_lower < sinc < t2_upper and cusa^alpha < sinc < cusa at x (None = unresolved)."""
    xi = RationalInterval(x)

    def test(b):
        p = _Point(xi, b)
        checks = [
            _less(p.bound("t1_lower"), p.sinc),
            _less(p.sinc, p.bound("t2_upper")),
            _less(p.bound("power_cusa_alpha"), p.sinc),
            _less(p.sinc, p.cusa),
        ]
        if False in checks:
            return False
        if None in checks:
            return None
        return True

    return _resolve(test, bits, 1024)[0]


def endpoint_gaps(offset: Fraction = Fraction(1, 10**7), bits: int = 80) -> dict:
    """|bound - 2/pi| at x = pi/2 - offset, certified upper bounds."""
    x = half_pi_enclosure(bits + 16).lo - offset
    p = _Point(RationalInterval(x), bits)
    target = 2 / p.pi
    out = {}
    for kind in ("t1_lower", "t1_upper", "t2_lower", "t2_upper"):
        d = p.bound(kind) - target
        out[kind] = max(abs(d.lo), abs(d.hi))
    return out


# --- Bernoulli series -------------------------------------------------------


def series_coefficient(series_id: str, k: int) -> Fraction:
    """Coefficient of the k-th summand (without its sign)."""
    b = abs_b(2 * k) / factorial(2 * k)
    if series_id == "cot_3_1":
        return 2 ** (2 * k) * b
    if series_id in ("csc_3_2", "x_over_sin_3_3"):
        return 2 * (2 ** (2 * k - 1) - 1) * b
    if series_id == "x_over_sin_sq_3_4":
        return 2 ** (2 * k) * (2 * k - 1) * b
    if series_id == "cos_over_sinsq_3_5":
        return (2 * k - 1) * (2 ** (2 * k) - 2) * b
    raise ValueError(f"unknown series {series_id!r}")


def _series_terms(series_id: str, x: RationalInterval, K: int):
    """(leading part, sign of the summands, summand list)."""
    if series_id == "cot_3_1":
        return 1 / x, -1, [series_coefficient(series_id, k) * x ** (2 * k - 1) for k in range(1, K + 1)]
    if series_id == "csc_3_2":
        return 1 / x, 1, [series_coefficient(series_id, k) * x ** (2 * k - 1) for k in range(1, K + 1)]
    if series_id in ("x_over_sin_3_3", "x_over_sin_sq_3_4"):
        return RationalInterval(1), 1, [series_coefficient(series_id, k) * x ** (2 * k) for k in range(1, K + 1)]
    if series_id == "cos_over_sinsq_3_5":
        return 1 / x**2, -1, [series_coefficient(series_id, k) * x ** (2 * k - 2) for k in range(1, K + 1)]
    raise ValueError(f"unknown series {series_id!r}")


def eval_series(series_id: str, x, K: int, bits: int = 60) -> RationalInterval:
    """Enclosure of the K-th partial sum at x (exact for rational x, then rounded out)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    x = _as_interval(x)
    if x.lo <= 0 or not x.hi < pi_enclosure(64).lo:
        raise ValueError("series are only used on (0, pi)")
    lead, sign, terms = _series_terms(series_id, x, K)
    total = lead
    for t in terms:
        total = total + t if sign > 0 else total - t
    return total.round_out(bits + 8)


def eval_series_direct(series_id: str, x, bits: int = 60) -> RationalInterval:
    """The closed form each series expands."""
    x = _as_interval(x)
    s = sin_interval(x, bits + 8)
    c = cos_interval(x, bits + 8)
    if series_id == "cot_3_1":
        v = c / s
    elif series_id == "csc_3_2":
        v = 1 / s
    elif series_id == "x_over_sin_3_3":
        v = x / s
    elif series_id == "x_over_sin_sq_3_4":
        v = (x / s) ** 2
    elif series_id == "cos_over_sinsq_3_5":
        v = c / s**2
    else:
        raise ValueError(f"unknown series {series_id!r}")
    return v.round_out(bits + 8)


__all__ = [
    "BOUND_KINDS",
    "SERIES_IDS",
    "BoundSpec",
    "PrecisionExhausted",
    "alpha_enclosure",
    "bound_error_scan",
    "endpoint_gaps",
    "eval_bound",
    "eval_series",
    "eval_series_direct",
    "eval_sinc",
    "exp_interval",
    "grid_points",
    "hierarchy_check",
    "hierarchy_report",
    "ln_interval",
    "sandwich_at",
    "write_figures",
]
