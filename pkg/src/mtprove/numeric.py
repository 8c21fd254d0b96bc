"""Exact scalars: rationals, rational intervals, polynomials in pi, and a
certified enclosure of pi.

Everything here is exact. Intervals have rational endpoints and every
operation returns an interval containing the exact result.
"""

from __future__ import annotations

import enum
import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence, Union

BigRational = Fraction
Number = Union[int, Fraction]

MAX_PRECISION_BITS = 4096


class PrecisionExhausted(ArithmeticError):
    """Raised when a certified decision needs more bits than the configured cap."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def fraction_str(q: Fraction) -> str:
    """Serialise as "numerator/denominator" (always with a slash)."""
    return f"{q.numerator}/{q.denominator}"


def floor_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def ceil_dyadic(q: Fraction, bits: int) -> Fraction:
    return Fraction(-((-q.numerator << bits) // q.denominator), 1 << bits)


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    def __mul__(self, other):
        if isinstance(other, Sign):
            return Sign(int(self) * int(other))
        return NotImplemented

    def __neg__(self):
        return Sign(-int(self))


class RationalInterval:
    """Closed interval [lo, hi] with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number | None = None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, value: Number) -> RationalInterval:
        return cls(value, value)

    @staticmethod
    def _coerce(other) -> RationalInterval:
        if isinstance(other, RationalInterval):
            return other
        return RationalInterval(as_fraction(other))

    def __repr__(self) -> str:
        return f"RationalInterval({self.lo}, {self.hi})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        if isinstance(value, RationalInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        value = as_fraction(value)
        return self.lo <= value <= self.hi

    def __contains__(self, value) -> bool:
        return self.contains(value)

    def overlaps(self, other: RationalInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: RationalInterval) -> RationalInterval:
        return RationalInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: RationalInterval) -> RationalInterval:
        return RationalInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def sign(self) -> Sign | None:
        """Sign of every point of the interval, or None if it straddles zero."""
        if self.lo > 0:
            return Sign.POSITIVE
        if self.hi < 0:
            return Sign.NEGATIVE
        if self.lo == self.hi == 0:
            return Sign.ZERO
        return None

    def round_out(self, bits: int) -> RationalInterval:
        """Widen outward to the dyadic grid 2**-bits (keeps denominators small)."""
        return RationalInterval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def abs(self) -> RationalInterval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(0, max(-self.lo, self.hi))

    def __neg__(self) -> RationalInterval:
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other) -> RationalInterval:
        other = self._coerce(other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> RationalInterval:
        other = self._coerce(other)
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> RationalInterval:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalInterval:
        if not isinstance(other, RationalInterval):
            c = as_fraction(other)
            if c >= 0:
                return RationalInterval(self.lo * c, self.hi * c)
            return RationalInterval(self.hi * c, self.lo * c)
        if self.lo >= 0 and other.lo >= 0:
            return RationalInterval(self.lo * other.lo, self.hi * other.hi)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> RationalInterval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"interval {self!r} contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> RationalInterval:
        if not isinstance(other, RationalInterval):
            return self * (1 / as_fraction(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> RationalInterval:
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> RationalInterval:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural exponents are supported")
        if n == 0:
            return RationalInterval(1)
        if n % 2 == 1 or self.lo >= 0:
            return RationalInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return RationalInterval(self.hi**n, self.lo**n)
        return RationalInterval(0, max(self.lo**n, self.hi**n))


# --- pi ---------------------------------------------------------------------

_MASTER_LEVELS = (256, 1024, MAX_PRECISION_BITS + 8)
_pi_masters: dict[int, RationalInterval] = {}
_pi_tiers: dict[int, RationalInterval] = {}
_pi_lock = threading.Lock()


def _arctan_inv(n: int, bits: int) -> RationalInterval:
    """Enclosure of arctan(1/n) from two consecutive alternating partial sums."""
    tol = Fraction(1, 1 << bits)
    x2 = n * n
    s = Fraction(0)
    power = n
    k = 0
    while True:
        term = Fraction(1, (2 * k + 1) * power)
        s_next = s + term if k % 2 == 0 else s - term
        if term < tol:
            return RationalInterval(min(s, s_next), max(s, s_next))
        s = s_next
        power *= x2
        k += 1


def _pi_master(level: int) -> RationalInterval:
    # Machin: pi = 16 arctan(1/5) - 4 arctan(1/239)
    a = _arctan_inv(5, level + 6)
    b = _arctan_inv(239, level + 6)
    enc = (a * 16 - b * 4).round_out(level + 2)
    for lower in _MASTER_LEVELS:
        if lower >= level:
            break
        enc = enc.intersect(_pi_masters[lower])
    return enc


def pi_enclosure(bits: int) -> RationalInterval:
    """Rational interval containing pi with width at most 2**-bits.

    Enclosures nest: a larger ``bits`` never gives an interval that leaves a
    smaller-``bits`` one.
    """
    if bits < 0:
        raise ValueError("bits must be non-negative")
    if bits > MAX_PRECISION_BITS:
        raise PrecisionExhausted(f"pi requested at {bits} bits, cap is {MAX_PRECISION_BITS}")
    cached = _pi_tiers.get(bits)
    if cached is not None:
        return cached
    with _pi_lock:
        level = next(L for L in _MASTER_LEVELS if bits + 4 <= L)
        for L in _MASTER_LEVELS:
            if L not in _pi_masters:
                _pi_masters[L] = _pi_master(L)
            if L == level:
                break
        tier = _pi_masters[level].round_out(bits + 2)
        _pi_tiers[bits] = tier
        return tier


def half_pi_enclosure(bits: int) -> RationalInterval:
    return pi_enclosure(bits + 1) / 2


def precision_ladder(start: int, cap: int | None = None) -> Iterable[int]:
    """64, 128, 256, ... up to the cap (inclusive)."""
    cap = MAX_PRECISION_BITS if cap is None else cap
    bits = max(1, start)
    while bits < cap:
        yield bits
        bits *= 2
    yield cap


# --- Q[pi] ------------------------------------------------------------------


class PiPolynomial:
    """Element of Q[pi]; ``coefficients[i]`` multiplies pi**i."""

    __slots__ = ("coefficients", "_hash")

    def __init__(self, coefficients: Sequence[Number] = ()):
        coeffs = [as_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(coeffs)
        self._hash = None

    @classmethod
    def constant(cls, value: Number) -> PiPolynomial:
        return cls([value])

    @classmethod
    def pi(cls) -> PiPolynomial:
        return cls([0, 1])

    @staticmethod
    def _coerce(other) -> PiPolynomial:
        if isinstance(other, PiPolynomial):
            return other
        return PiPolynomial([as_fraction(other)])

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_rational(self) -> bool:
        return len(self.coefficients) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} depends on pi")
        return self.coefficients[0] if self.coefficients else Fraction(0)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiPolynomial([other])
        if not isinstance(other, PiPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coefficients)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __neg__(self) -> PiPolynomial:
        return PiPolynomial([-c for c in self.coefficients])

    def __add__(self, other) -> PiPolynomial:
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return PiPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    __radd__ = __add__

    def __sub__(self, other) -> PiPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PiPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> PiPolynomial:
        if not isinstance(other, PiPolynomial):
            c = as_fraction(other)
            return PiPolynomial([a * c for a in self.coefficients])
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return PiPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return PiPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PiPolynomial:
        result = PiPolynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def evaluate(self, pi: RationalInterval) -> RationalInterval:
        acc = RationalInterval(0)
        for c in reversed(self.coefficients):
            acc = acc * pi + c
        return acc

    def enclosure(self, bits: int) -> RationalInterval:
        return self.evaluate(pi_enclosure(bits))

    def approx(self) -> float:
        """Float value, for display only."""
        return float(self.enclosure(64).mid)

    def __repr__(self) -> str:
        return f"PiPolynomial({[str(c) for c in self.coefficients]})"

    def __str__(self) -> str:
        return format_pi_poly(self)


def format_pi_poly(p: PiPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(len(p.coefficients) - 1, -1, -1):
        c = p.coefficients[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            pi_part = "pi" if i == 1 else f"pi^{i}"
            body = pi_part if mag == 1 else f"{mag}*{pi_part}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def sign_of(p: PiPolynomial, cap: int | None = None) -> Sign:
    """Sign of ``p`` evaluated at pi.

    A nonzero element of Q[pi] never vanishes at pi (pi is transcendental), so
    refining the enclosure always terminates; the cap turns pathological
    inputs into ``PrecisionExhausted``.
    """
    if p.is_zero():
        return Sign.ZERO
    if p.is_rational():
        return Sign.POSITIVE if p.coefficients[0] > 0 else Sign.NEGATIVE
    for bits in precision_ladder(64, cap):
        s = p.enclosure(bits).sign()
        if s is not None:
            return s
    raise PrecisionExhausted(f"could not resolve the sign of {p}")


def round_directed(p: PiPolynomial, direction: str, gap: Number, cap: int | None = None) -> Fraction:
    """Short decimal rational within ``gap`` of p(pi), on the requested side.

    lower: r <= p(pi) < r + gap;  upper: r - gap < p(pi) <= r.
    """
    gap = as_fraction(gap)
    if gap <= 0:
        raise ValueError("gap must be positive")
    if direction not in ("lower", "upper"):
        raise ValueError(f"direction must be 'lower' or 'upper', not {direction!r}")
    if p.is_rational():
        return p.rational_value()
    # enclosure width below gap/4 so some decimal grid works
    need = max(8, math.ceil(-math.log2(gap)) + 4) if gap < 1 else 8
    for bits in precision_ladder(need, cap):
        enc = p.enclosure(bits)
        if enc.width * 4 > gap:
            continue
        d = 0
        while True:
            scale = 10**d
            if direction == "lower":
                r = Fraction(math.floor(enc.lo * scale), scale)
                if enc.hi - r < gap:
                    return r
            else:
                r = Fraction(math.ceil(enc.hi * scale), scale)
                if r - enc.lo < gap:
                    return r
            d += 1
    raise PrecisionExhausted(f"could not rationalize {p} within {gap}")
