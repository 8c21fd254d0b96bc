"""Maclaurin truncations of sin and cos as certified one-sided bounds.

On (0, 2] the Maclaurin series of sin and cos alternate with terms that
decrease in magnitude from the first omitted one, so the sign of that
omitted term fixes the side of the bound:

    sin: degree = 1 (mod 4) is an upper bound, degree = 3 (mod 4) a lower one
    cos: degree = 0 (mod 4) is an upper bound, degree = 2 (mod 4) a lower one

The same alternating-series argument gives the rational enclosures of
sin, cos and sinc used for numeric evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import sturm
from .expr import MTPTerm, XPolynomial
from .numeric import (
    PiPolynomial,
    RationalInterval,
    Sign,
    as_fraction,
    half_pi_enclosure,
    round_directed,
    sign_of,
)

FUNCTIONS = ("sin", "cos")
SIDES = ("lower", "upper")
DOMAIN_MAX = Fraction(2)


class SignIndefinite(ValueError):
    """A term coefficient changes sign on the interval.

    ``split_points`` lists rational points inside the interval where the
    coefficient is known to vanish; splitting there may resolve the sign.
    """

    def __init__(self, message: str, split_points=()):
        super().__init__(message)
        self.split_points = tuple(split_points)


class FactorBoundIndefinite(ValueError):
    """A factor bound needed in a product could not be certified one-signed."""


def _check_function(function: str) -> None:
    if function not in FUNCTIONS:
        raise ValueError(f"unknown function {function!r}")


def maclaurin_coefficient(function: str, k: int) -> Fraction:
    _check_function(function)
    if function == "sin":
        if k % 2 == 0:
            return Fraction(0)
        return Fraction((-1) ** ((k - 1) // 2), math.factorial(k))
    if k % 2 == 1:
        return Fraction(0)
    return Fraction((-1) ** (k // 2), math.factorial(k))


def taylor_trig(function: str, degree: int) -> XPolynomial:
    """Maclaurin polynomial of sin or cos up to x**degree, exact rationals."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return XPolynomial.from_rationals(maclaurin_coefficient(function, k) for k in range(degree + 1))


def canonical_degree(function: str, degree: int) -> int:
    """Largest degree <= ``degree`` whose top coefficient is nonzero."""
    if function == "sin":
        if degree < 1:
            raise ValueError("sin has no truncation of degree 0 that bounds it on (0, 2]")
        return degree if degree % 2 == 1 else degree - 1
    return degree if degree % 2 == 0 else degree - 1


def truncation_side(function: str, degree: int) -> str:
    """Side of the bound given by the degree-``degree`` truncation on (0, 2]."""
    _check_function(function)
    d = canonical_degree(function, degree)
    if function == "sin":
        return "upper" if d % 4 == 1 else "lower"
    return "upper" if d % 4 == 0 else "lower"


def omitted_term_magnitude(function: str, degree: int, x: Fraction) -> Fraction:
    """|first omitted Maclaurin term| at x, for the canonical truncation."""
    d = canonical_degree(function, degree) + 2
    return abs(as_fraction(x)) ** d / math.factorial(d)


@dataclass(frozen=True)
class TrigTruncation:
    function: str
    degree: int
    side: str
    poly: XPolynomial = field(compare=False, repr=False)


def directional_truncation(function: str, side: str, min_degree: int) -> TrigTruncation:
    """Smallest truncation of degree >= min_degree bounding ``function`` from ``side``."""
    _check_function(function)
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    if min_degree < 0:
        raise ValueError("min_degree must be non-negative")
    d = min_degree
    while True:
        if (function == "sin" and d % 2 == 1) or (function == "cos" and d % 2 == 0):
            if truncation_side(function, d) == side:
                return TrigTruncation(function, d, side, taylor_trig(function, d))
        d += 1


# --- numeric enclosures -----------------------------------------------------


def _series_enclosure(x: Fraction, bits: int, e: int, f: int) -> RationalInterval:
    """Enclose sum_k (-1)^k x^(2k+e) / (2k+f)! at a rational point.

    (e, f) = (1, 1) is sin, (0, 0) is cos, (0, 1) is sinc.  The sum is
    truncated once the next term is below 2**-(bits+2) and the terms are
    decreasing, so the alternating tail is bounded by that next term.
    """
    ax = abs(x)
    if ax > 8:
        raise ValueError("trig enclosure only supported for |x| <= 8")
    tol = Fraction(1, 1 << (bits + 2))
    x2 = ax * ax
    N = 0
    while True:
        n = 2 * N + 2 + f
        tail = ax ** (2 * N + 2 + e) / math.factorial(n)
        if tail < tol and (n + 1) * (n + 2) > x2:
            break
        N += 1
    p, q = x.numerator, x.denominator
    p2, q2 = p * p, q * q
    pk = p**e
    qk = q2**N
    fk = math.factorial(2 * N + f) // math.factorial(f)
    num = 0
    for k in range(N + 1):
        num += (-pk if k % 2 else pk) * qk * fk
        if k < N:
            pk *= p2
            qk //= q2
            fk //= (2 * k + f + 1) * (2 * k + f + 2)
    value = Fraction(num, q ** (2 * N + e) * math.factorial(2 * N + f))
    return RationalInterval(value - tail, value + tail).round_out(bits + 2)


@lru_cache(maxsize=1 << 16)
def sin_point(x: Fraction, bits: int) -> RationalInterval:
    return _series_enclosure(x, bits, 1, 1)


@lru_cache(maxsize=1 << 16)
def cos_point(x: Fraction, bits: int) -> RationalInterval:
    return _series_enclosure(x, bits, 0, 0)


@lru_cache(maxsize=1 << 16)
def sinc_point(x: Fraction, bits: int) -> RationalInterval:
    return _series_enclosure(x, bits, 0, 1)


def _clip(iv: RationalInterval) -> RationalInterval:
    return RationalInterval(max(iv.lo, Fraction(-1)), min(iv.hi, Fraction(1)))


def sin_interval(x: RationalInterval, bits: int) -> RationalInterval:
    """Enclosure of sin over x, for x inside [-4, 4]."""
    if x.lo < -4 or x.hi > 4:
        raise ValueError("sin_interval supports [-4, 4]")
    if x.is_point:
        return sin_point(x.lo, bits)
    enc = sin_point(x.lo, bits).hull(sin_point(x.hi, bits))
    hp = half_pi_enclosure(bits)
    lo, hi = enc.lo, enc.hi
    if x.lo <= hp.hi and x.hi >= hp.lo:
        hi = Fraction(1)
    if x.lo <= -hp.lo and x.hi >= -hp.hi:
        lo = Fraction(-1)
    return _clip(RationalInterval(lo, hi))


def cos_interval(x: RationalInterval, bits: int) -> RationalInterval:
    """Enclosure of cos over x, for x inside [-4, 4]."""
    if x.lo < -4 or x.hi > 4:
        raise ValueError("cos_interval supports [-4, 4]")
    if x.is_point:
        return cos_point(x.lo, bits)
    enc = cos_point(x.lo, bits).hull(cos_point(x.hi, bits))
    lo, hi = enc.lo, enc.hi
    if x.lo <= 0 <= x.hi:
        hi = Fraction(1)
    pi = 2 * half_pi_enclosure(bits)
    if x.lo <= pi.hi and x.hi >= pi.lo:
        lo = Fraction(-1)
    if x.lo <= -pi.lo and x.hi >= -pi.hi:
        lo = Fraction(-1)
    return _clip(RationalInterval(lo, hi))


def sinc_interval(x: RationalInterval, bits: int) -> RationalInterval:
    """Enclosure of sin(x)/x over x (sinc is even and decreasing on [0, pi])."""
    if x.is_point:
        return sinc_point(x.lo, bits)
    if x.lo >= 0 and x.hi <= 3:
        return sinc_point(x.hi, bits).hull(sinc_point(x.lo, bits))
    return sin_interval(x, bits) / x


# --- term bounds ------------------------------------------------------------


def _as_span(interval) -> tuple[Fraction, Fraction]:
    lo, hi = interval
    lo = as_fraction(lo)
    if isinstance(hi, str):
        if hi.replace(" ", "") not in ("pi/2", "π/2"):
            raise ValueError(f"unsupported endpoint {hi!r}")
        hi = half_pi_enclosure(64).hi
    hi = as_fraction(hi)
    if lo < 0 or hi > DOMAIN_MAX or lo >= hi:
        raise ValueError(f"interval ({lo}, {hi}) is not inside (0, 2]")
    return lo, hi


def pi_free_factor(p: XPolynomial) -> tuple[tuple, XPolynomial]:
    """Split p = g(x) * h(x) with g the monic gcd of p's pi-components."""
    comps = [c for c in p.pi_components() if c]
    g: tuple = ()
    for c in comps:
        g = sturm.gcd(g, c) if g else sturm.monic(c)
    if len(g) <= 1:
        return (Fraction(1),), p
    h = []
    for j, c in enumerate(p.pi_components()):
        h.append(sturm.divmod_poly(c, g)[0] if c else ())
    width = max(len(c) for c in h)
    coeffs = []
    for i in range(width):
        coeffs.append(PiPolynomial([c[i] if i < len(c) else 0 for c in h]))
    return g, XPolynomial(coeffs)


def rationalize(p: XPolynomial, direction: str, gap: Fraction) -> tuple:
    """Coefficient-wise directed rationalisation (a bound for x >= 0)."""
    return sturm.trim(round_directed(c, direction, gap) for c in p.coefficients)


CLASSIFY_GAP = Fraction(1, 10**15)


def coefficient_sign(coeff: XPolynomial, lo: Fraction, hi: Fraction) -> Sign:
    """Certified sign of coeff on the open interval (lo, hi), lo >= 0.

    POSITIVE means coeff > 0 on (lo, hi), hence >= 0 on its closure.
    """
    if coeff.is_zero():
        return Sign.ZERO
    if coeff.degree == 0:
        return sign_of(coeff.coefficients[0])
    g, h = pi_free_factor(coeff)
    g_sign = 1 if len(g) <= 1 else sturm.classify_sign_open(g, lo, hi)
    if g_sign == 0:
        splits = [r for r in sturm.rational_roots(g) if lo < r < hi]
        raise SignIndefinite(f"coefficient {coeff} changes sign on ({lo}, {hi})", splits)
    if h.degree == 0:
        h_sign = int(sign_of(h.coefficients[0]))
    elif sturm.prove_sign(rationalize(h, "lower", CLASSIFY_GAP), lo, hi, sturm.STRICTLY_POSITIVE, False).proved:
        h_sign = 1
    elif sturm.prove_sign(rationalize(h, "upper", CLASSIFY_GAP), lo, hi, sturm.STRICTLY_NEGATIVE, False).proved:
        h_sign = -1
    else:
        raise SignIndefinite(f"coefficient {coeff} has no certified sign on ({lo}, {hi})")
    return Sign(g_sign * h_sign)


@dataclass
class FactorStep:
    """One factor of a trig product and the truncations that bound it."""

    function: str
    lower_degree: int | None = None
    upper_degree: int | None = None


@dataclass
class TermBound:
    term: MTPTerm
    side: str
    coeff_sign: Sign
    need: str  # side of the trig product bound actually required
    factors: list[FactorStep]
    poly: XPolynomial

    def degrees_used(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for f in self.factors:
            for d in (f.lower_degree, f.upper_degree):
                if d is not None:
                    out[f.function] = max(out.get(f.function, -1), d)
        return out


def _rational_sign_open(p: tuple, lo: Fraction, hi: Fraction) -> int:
    return sturm.classify_sign_open(p, lo, hi)


def product_bound(functions: list[str], need: str, lo: Fraction, hi: Fraction, floors: dict[str, int]):
    """Polynomial bound of prod(functions) on (lo, hi) from side ``need``.

    Returns (rational coefficient tuple, list of FactorStep).
    """
    steps = [FactorStep(f) for f in functions]
    if len(functions) == 1:
        t = directional_truncation(functions[0], need, floors.get(functions[0], 0))
        if need == "lower":
            steps[0].lower_degree = t.degree
        else:
            steps[0].upper_degree = t.degree
        return t.poly.rational_coefficients(), steps

    # with two or more factors every factor must itself be non-negative
    if "cos" in functions and not hi <= half_pi_enclosure(64).lo:
        raise FactorBoundIndefinite("cos is not certified non-negative on the interval")

    def trunc(i: int, side: str) -> tuple:
        t = directional_truncation(functions[i], side, floors.get(functions[i], 0))
        if side == "lower":
            steps[i].lower_degree = t.degree
        else:
            steps[i].upper_degree = t.degree
        return t.poly.rational_coefficients()

    upper = trunc(0, "upper")
    for i in range(1, len(functions)):
        upper = sturm.mul(upper, trunc(i, "upper"))
    if need == "upper":
        return upper, steps

    acc_lower = trunc(0, "lower")
    acc_upper = trunc(0, "upper")
    for i in range(1, len(functions)):
        acc_sign = _rational_sign_open(acc_lower, lo, hi)
        if acc_sign == 0:
            raise FactorBoundIndefinite("partial product lower bound changes sign")
        if acc_sign < 0:
            new_lower = sturm.mul(acc_lower, trunc(i, "upper"))
        else:
            low_i = trunc(i, "lower")
            s = _rational_sign_open(low_i, lo, hi)
            if s == 0:
                raise FactorBoundIndefinite(f"lower bound of {functions[i]} changes sign")
            new_lower = sturm.mul(acc_lower, low_i) if s > 0 else sturm.mul(acc_upper, low_i)
        acc_upper = sturm.mul(acc_upper, trunc(i, "upper"))
        acc_lower = new_lower
    return acc_lower, steps


def term_bound_detail(term: MTPTerm, side: str, interval, degrees: dict[str, int] | None = None) -> TermBound:
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    lo, hi = _as_span(interval)
    floors = dict(degrees or {})
    functions = ["sin"] * term.sin_pow + ["cos"] * term.cos_pow
    if not functions:
        return TermBound(term, side, Sign.ZERO, "none", [], term.coeff)
    csign = coefficient_sign(term.coeff, lo, hi)
    if (csign > 0) == (side == "lower"):
        need = "lower"
    else:
        need = "upper"
    trig_poly, steps = product_bound(functions, need, lo, hi, floors)
    poly = term.coeff * XPolynomial.from_rationals(trig_poly)
    return TermBound(term, side, csign, need, steps, poly)


def term_bound(term: MTPTerm, side: str, interval, degrees: dict[str, int] | None = None) -> XPolynomial:
    """Polynomial q with q <= term on the interval (side='lower'), or >= for 'upper'."""
    return term_bound_detail(term, side, interval, degrees).poly
