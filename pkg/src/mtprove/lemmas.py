"""Bernoulli numbers and finite checks of the supporting lemmas.

The sequence claims (ratio bounds, c_k decreasing, N(k) < 4) are checked
in exact rational arithmetic for a finite range of k. Monotonicity claims
about functions are checked by certified sampling: this is evidence on a
grid, not a proof over the continuum.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .numeric import (
    MAX_PRECISION_BITS,
    PrecisionExhausted,
    RationalInterval,
    half_pi_enclosure,
    pi_enclosure,
    precision_ladder,
)
from .taylor import cos_point, sin_point

BERNOULLI_MAX = 400


class BernoulliRangeError(ValueError):
    pass


class BernoulliCache:
    """B_n from sum_{j=0}^{n} C(n+1, j) B_j = 0, extended on demand."""

    def __init__(self, maximum: int = BERNOULLI_MAX):
        self.maximum = maximum
        self.table: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> Fraction:
        if n < 0 or n > self.maximum:
            raise BernoulliRangeError(f"Bernoulli index {n} outside [0, {self.maximum}]")
        if n < len(self.table):
            return self.table[n]
        with self._lock:
            while len(self.table) <= n:
                m = len(self.table)
                if m >= 3 and m % 2 == 1:
                    self.table.append(Fraction(0))
                    continue
                s = sum(comb(m + 1, j) * self.table[j] for j in range(m))
                self.table.append(-s / (m + 1))
        return self.table[n]

    def recurrence_holds(self, n: int) -> bool:
        return sum(comb(n + 1, j) * self(j) for j in range(n + 1)) == 0


_BERNOULLI = BernoulliCache()


def bernoulli(n: int) -> Fraction:
    return _BERNOULLI(n)


def abs_b(k2: int) -> Fraction:
    return abs(bernoulli(k2))


# --- Bernoulli ratio bounds and the coefficient sequence -------------------


def lemma4_bounds(k: int, bits: int) -> tuple[RationalInterval, RationalInterval]:
    """Enclosures of the lower and upper bounds for |B_{2k+2}|/|B_{2k}|."""
    pi2 = pi_enclosure(bits) ** 2
    lower = RationalInterval((2 ** (2 * k - 1) - 1) * (2 * k + 1) * (2 * k + 2), None) / (
        pi2 * (2 ** (2 * k + 1) - 1)
    )
    upper = RationalInterval((2 ** (2 * k) - 1) * (2 * k + 1) * (2 * k + 2), None) / (pi2 * (2 ** (2 * k + 2) - 1))
    return lower, upper


def lemma4_check(k_max: int, bits: int = 60) -> bool:
    for k in range(1, k_max + 1):
        r = abs_b(2 * k + 2) / abs_b(2 * k)
        for b in precision_ladder(bits):
            lower, upper = lemma4_bounds(k, b)
            if lower.hi < r < upper.lo:
                break
            if r <= lower.lo or r >= upper.hi:
                return False
        else:
            raise PrecisionExhausted(f"Bernoulli ratio bounds at k = {k} not separated")
    return True


def _ab_poly(k: int) -> tuple[int, int]:
    y = 4**k
    return 2 * k * y - 2 * y + k + 2, 2 * k * y - 3 * y + 4


def a_k(k: int) -> Fraction:
    return Fraction(4) * abs_b(2 * k + 2) / factorial(2 * k + 2) * _ab_poly(k)[0]


def b_k(k: int) -> Fraction:
    return Fraction(3) * abs_b(2 * k) / factorial(2 * k) * _ab_poly(k)[1]


def c_k(k: int) -> Fraction:
    return a_k(k) / b_k(k)


def c_k_closed_form(k: int) -> Fraction:
    """The simplified form 2/3 * ratio / ((k+1)(2k+1)) * polynomial quotient."""
    num, den = _ab_poly(k)
    return Fraction(2, 3) * abs_b(2 * k + 2) / abs_b(2 * k) / ((k + 1) * (2 * k + 1)) * Fraction(num, den)


@dataclass(frozen=True)
class CoefficientRatio:
    k: int
    a_k: Fraction
    b_k: Fraction
    c_k: Fraction


def coefficient_ratio(k: int) -> CoefficientRatio:
    a, b = a_k(k), b_k(k)
    return CoefficientRatio(k, a, b, a / b)


def ck_decreasing_check(k_max: int) -> bool:
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    prev = None
    for k in range(2, k_max + 1):
        r = coefficient_ratio(k)
        if r.a_k <= 0 or r.b_k <= 0:
            return False
        if prev is not None and not r.c_k < prev:
            return False
        prev = r.c_k
    return True


def n_of_k(k: int) -> Fraction:
    y = 4**k
    return Fraction(2 * (4 * y - 1) * (2 * y - 1), (16 * y - 1) * (y - 2)) * Fraction(
        (8 * k * y + k + 3) * (2 * k * y - 3 * y + 4), (2 * k * y - y + 1) * (2 * k * y - 2 * y + k + 2)
    )


def nk_integer_sides(k: int) -> tuple[int, int]:
    """Both sides of N(k) < 4 with the (positive) denominators cleared."""
    y = 4**k
    lhs = 2 * (4 * y - 1) * (2 * y - 1) * (8 * k * y + k + 3) * (2 * k * y - 3 * y + 4)
    rhs = 4 * (16 * y - 1) * (y - 2) * (2 * k * y - y + 1) * (2 * k * y - 2 * y + k + 2)
    return lhs, rhs


def nk_expanded_sides(k: int) -> tuple[int, int]:
    """The same comparison with pairs of factors multiplied out (half of the cleared form)."""
    y = 4**k
    lhs = (8 * y * y - 6 * y + 1) * (16 * k * k * y * y - 24 * k * y * y + 2 * k * k * y + 35 * k * y - 9 * y + 4 * k + 12)
    rhs = (32 * y * y - 66 * y + 4) * (
        4 * k * k * y * y - 6 * k * y * y + 2 * y * y + 2 * k * k * y + 5 * k * y - 4 * y + k + 2
    )
    return lhs, rhs


NK_CHAIN_MAX = 50


def nk_check(k_max: int, bits: int = 60) -> bool:
    """N(k) < 4 for k = 2..k_max, in three equivalent forms, plus the c_k chain."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    for k in range(2, k_max + 1):
        lhs, rhs = nk_integer_sides(k)
        elhs, erhs = nk_expanded_sides(k)
        if not (n_of_k(k) < 4 and lhs < rhs and elhs < erhs):
            return False
    # 4 c_{k+1} / c_k < N(k) is the step that makes N(k) < 4 sufficient
    for k in range(2, min(k_max, NK_CHAIN_MAX) + 1):
        if not 4 * c_k(k + 1) / c_k(k) < n_of_k(k):
            return False
    return True


# --- auxiliary functions ----------------------------------------------------


@dataclass(frozen=True)
class _Ctx:
    x: RationalInterval
    s: RationalInterval
    c: RationalInterval
    pi: RationalInterval


def _ctx(x: Fraction, bits: int) -> _Ctx:
    return _Ctx(RationalInterval(x), sin_point(x, bits), cos_point(x, bits), pi_enclosure(bits))


def _cusa_num(t: _Ctx) -> RationalInterval:
    # 3 sin x - x cos x - 2x, negative on (0, pi/2) by the Cusa inequality
    return 3 * t.s - t.x * t.c - 2 * t.x


AUX_FUNCTIONS = {
    "P": lambda t: t.x**2 * t.s / (t.s - t.x * t.c),
    "Q": lambda t: _cusa_num(t) / t.x**5,
    "R": lambda t: (t.s**2).reciprocal(),
    "T": lambda t: t.x**2 * t.s / (t.x - t.s),
    "u": lambda t: t.x * t.c / t.s,
    "v": lambda t: 5 * t.x * t.c / t.s - t.x**2 + 3,
    "f": lambda t: _cusa_num(t) / (3 * t.x**2 - 3 * t.x * t.s),
    "F": lambda t: _cusa_num(t) / (3 * t.x * (t.x - t.s) ** 2),
    "g": lambda t: _cusa_num(t) / (3 * t.x * t.s - 3 * t.x**2 * t.c),
    "G": lambda t: _cusa_num(t) / (3 * t.x * (t.s - t.x * t.c) ** 2),
    # intermediate ratios of the monotone l'Hospital chains
    "q2/h2": lambda t: (t.x * t.s + 2 * t.c - 2) / (5 * t.x**4),
    "q3/h3": lambda t: (t.x * t.c - t.s) / (20 * t.x**3),
    "q3'/h3'": lambda t: -t.s / (60 * t.x),
    "f:g2/h2": lambda t: (t.x * t.s + 2 * t.c - 2) / (6 * t.x - 3 * t.s - 3 * t.x * t.c),
    "f:g3/h3": lambda t: (t.x * t.c - t.s) / (3 * t.x * t.s - 6 * t.c + 6),
    "f:g3'/h3'": lambda t: -t.x / (3 * (3 + t.x * t.c / t.s)),
    "g:g2/h2": lambda t: (t.x * t.s + 2 * t.c - 2) / (3 * t.s - 3 * t.x * t.c + 3 * t.x**2 * t.s),
    "g:g3/h3": lambda t: (t.x * t.c - t.s) / (9 * t.x * t.s + 3 * t.x**2 * t.c),
    "g:g3'/h3'": lambda t: -t.x / (3 * (5 * t.x * t.c / t.s - t.x**2 + 3)),
}

# claimed (direction, sign, right end of the domain: "pi/2" or "pi")
AUX_CLAIMS = {
    "P": ("decreasing", 1, "pi/2"),
    "Q": ("increasing", -1, "pi/2"),
    "R": ("decreasing", 1, "pi/2"),
    "T": ("decreasing", 1, "pi"),
    "u": ("decreasing", 1, "pi/2"),
    "v": ("decreasing", 1, "pi/2"),
    "f": ("decreasing", -1, "pi/2"),
    "F": ("increasing", -1, "pi/2"),
    "g": ("decreasing", -1, "pi/2"),
    "G": ("increasing", -1, "pi/2"),
    "q2/h2": ("increasing", -1, "pi/2"),
    "q3/h3": ("increasing", -1, "pi/2"),
    "q3'/h3'": ("increasing", -1, "pi/2"),
    "f:g2/h2": ("decreasing", -1, "pi/2"),
    "f:g3/h3": ("decreasing", -1, "pi/2"),
    "f:g3'/h3'": ("decreasing", -1, "pi/2"),
    "g:g2/h2": ("decreasing", -1, "pi/2"),
    "g:g3/h3": ("decreasing", -1, "pi/2"),
    "g:g3'/h3'": ("decreasing", -1, "pi/2"),
}

DEFAULT_DELTA = Fraction(1, 1000)
MONOTONICITY_CAP = 1024


def aux_value(name: str, x: Fraction, bits: int) -> RationalInterval:
    return AUX_FUNCTIONS[name](_ctx(Fraction(x), bits))


def grid(n: int, lo: Fraction, hi: Fraction) -> list[Fraction]:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    return [lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)]


def _domain_hi(end: str) -> Fraction:
    hp = half_pi_enclosure(64).lo
    return hp if end == "pi/2" else 2 * hp


@dataclass
class MonotonicityVerdict:
    name: str
    claim: str
    sign: int
    outcome: str  # consistent | violated | inconclusive
    grid_size: int
    lo: Fraction
    hi: Fraction
    point: Fraction | None = None
    inconclusive_points: list = field(default_factory=list)
    max_bits: int = 0

    @property
    def consistent(self) -> bool:
        return self.outcome == "consistent"

    def to_dict(self) -> dict:
        return {
            "claim": f"{self.name} {'positive' if self.sign > 0 else 'negative'} and strictly {self.claim}",
            "range": [float(self.lo), float(self.hi)],
            "grid": self.grid_size,
            "verdict": self.outcome,
            "point": None if self.point is None else float(self.point),
            "inconclusive_points": [float(p) for p in self.inconclusive_points],
            "note": "finite certified sampling, not a proof",
        }


def aux_monotonicity(name: str, grid_size: int = 1000, bits: int = 60, delta: Fraction = DEFAULT_DELTA,
                     cap: int = MONOTONICITY_CAP) -> MonotonicityVerdict:
    if name not in AUX_FUNCTIONS:
        raise ValueError(f"unknown auxiliary function {name!r}")
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    claim, sign, end = AUX_CLAIMS[name]
    lo, hi = delta, _domain_hi(end) - delta
    xs = grid(grid_size, lo, hi)
    verdict = MonotonicityVerdict(name, claim, sign, "consistent", grid_size, lo, hi, max_bits=bits)
    levels = [b for b in precision_ladder(bits, cap)]
    level_of = [0] * len(xs)
    values = [aux_value(name, x, levels[0]) for x in xs]

    def refine(i: int) -> bool:
        if level_of[i] + 1 >= len(levels):
            return False
        level_of[i] += 1
        values[i] = aux_value(name, xs[i], levels[level_of[i]])
        verdict.max_bits = max(verdict.max_bits, levels[level_of[i]])
        return True

    for i, x in enumerate(xs):
        while True:
            v = values[i]
            if (v.lo > 0) if sign > 0 else (v.hi < 0):
                break
            if ((v.hi < 0) if sign > 0 else (v.lo > 0)) or v.hi == v.lo == 0:
                verdict.outcome, verdict.point = "violated", x
                return verdict
            if not refine(i):
                verdict.inconclusive_points.append(x)
                break
    for i in range(len(xs) - 1):
        while True:
            a, b = values[i], values[i + 1]
            if (a.hi < b.lo) if claim == "increasing" else (a.lo > b.hi):
                break
            if (a.lo >= b.hi) if claim == "increasing" else (a.hi <= b.lo):
                verdict.outcome, verdict.point = "violated", xs[i]
                return verdict
            target = i if a.width >= b.width else i + 1
            if not refine(target) and not refine(i + 1 if target == i else i):
                verdict.inconclusive_points.append(xs[i])
                break
    if verdict.inconclusive_points:
        verdict.outcome = "inconclusive"
    return verdict


# --- decompositions ---------------------------------------------------------

IDENTITY_TOLERANCE = Fraction(1, 10**10)


def _residual(a: RationalInterval, b: RationalInterval) -> Fraction:
    """Certified bound on |a_true - b_true|; negative means the intervals cannot both hold."""
    return max(a.hi - b.lo, b.hi - a.lo)


def decomposition_residuals(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    t = _ctx(x, bits)
    f_big, g_big = AUX_FUNCTIONS["F"](t), AUX_FUNCTIONS["G"](t)
    q, r, p, tt = AUX_FUNCTIONS["Q"](t), AUX_FUNCTIONS["R"](t), AUX_FUNCTIONS["P"](t), AUX_FUNCTIONS["T"](t)
    rhs_f = q * r * tt**2 / 3
    rhs_g = p**2 * q * r / 3
    if not (f_big.overlaps(rhs_f) and g_big.overlaps(rhs_g)):
        return Fraction(-1), Fraction(-1)
    return _residual(f_big, rhs_f), _residual(g_big, rhs_g)


@dataclass
class DecompositionReport:
    ok: bool
    grid_size: int
    max_residual: Fraction
    endpoint_f: RationalInterval
    endpoint_g: RationalInterval
    failures: list = field(default_factory=list)


ENDPOINT_OFFSET = Fraction(1, 10**6)
ENDPOINT_TOLERANCE = Fraction(1, 10**5)


def decomposition_report(grid_size: int = 512, bits: int = 60, delta: Fraction = DEFAULT_DELTA) -> DecompositionReport:
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    hi = half_pi_enclosure(64).lo - delta
    worst = Fraction(0)
    failures = []
    for x in grid(grid_size, delta, hi):
        for b in precision_ladder(bits):
            try:
                rf, rg = decomposition_residuals(x, b)
            except ZeroDivisionError:
                continue
            if rf < 0:
                failures.append(x)
                break
            if max(rf, rg) < IDENTITY_TOLERANCE:
                worst = max(worst, rf, rg)
                break
            if b >= MAX_PRECISION_BITS:
                failures.append(x)
                break

    # right-limit values: f(pi/2-) = (2/pi - 2/3)/(pi/2 - 1), g(pi/2-) = 2/pi - 2/3
    pi = pi_enclosure(bits + 8)
    xe = half_pi_enclosure(bits + 8).lo - ENDPOINT_OFFSET
    t = _ctx(xe, bits + 8)
    lim_g = 2 / pi - Fraction(2, 3)
    lim_f = lim_g / (pi / 2 - 1)
    ef, eg = AUX_FUNCTIONS["f"](t), AUX_FUNCTIONS["g"](t)
    ok_ends = _residual(ef, lim_f) < ENDPOINT_TOLERANCE and _residual(eg, lim_g) < ENDPOINT_TOLERANCE
    if not ok_ends:
        failures.append("endpoint")
    return DecompositionReport(not failures, grid_size, worst, ef, eg, failures)


def decomposition_check(grid_size: int = 512, bits: int = 60) -> bool:
    return decomposition_report(grid_size, bits).ok


def endpoint_limit_F(bits: int = 60) -> RationalInterval:
    """F(pi/2-) = (2/pi - 2/3)(pi/2 - 1)^-2."""
    pi = pi_enclosure(bits)
    return (2 / pi - Fraction(2, 3)) / (pi / 2 - 1) ** 2


MAIN_AUX = ("P", "Q", "T", "u", "v", "f", "g", "F", "G")


def run_all(grid_size: int = 1000, bits: int = 60) -> dict:
    """Every lemma check with its outcome (used by the CLI and the scripts)."""
    out = {
        "lemma4(50)": lemma4_check(50, bits),
        "ck_decreasing(50)": ck_decreasing_check(50),
        "nk(1000)": nk_check(1000, bits),
    }
    for name in AUX_FUNCTIONS:
        out[f"monotone {name}"] = aux_monotonicity(name, grid_size, bits)
    out["decomposition(512)"] = decomposition_report(512, bits)
    return out

