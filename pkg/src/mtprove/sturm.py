"""Exact positivity decisions for rational univariate polynomials.

Polynomials are tuples of ``Fraction`` ordered from the constant term up.
All arithmetic is exact; Sturm remainders are rescaled by positive
constants only, which leaves every sign variation count unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numeric import as_fraction, fraction_str

QPoly = tuple  # tuple[Fraction, ...], low degree first

STRICTLY_POSITIVE = "strictly-positive"
STRICTLY_NEGATIVE = "strictly-negative"
RELATIONS = (STRICTLY_POSITIVE, STRICTLY_NEGATIVE)


# --- basic rational polynomial arithmetic -----------------------------------


def as_qpoly(p) -> QPoly:
    """Accept a coefficient sequence or a pi-free XPolynomial."""
    if hasattr(p, "rational_coefficients"):
        return trim(p.rational_coefficients())
    return trim(as_fraction(c) for c in p)


def trim(coeffs) -> QPoly:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(Fraction(c) for c in out)


def degree(p: QPoly) -> int:
    return len(p) - 1


def evaluate(p: QPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at(p: QPoly, x: Fraction) -> int:
    v = evaluate(p, x)
    return (v > 0) - (v < 0)


def add(p: QPoly, q: QPoly) -> QPoly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def neg(p: QPoly) -> QPoly:
    return tuple(-c for c in p)


def scale(p: QPoly, c) -> QPoly:
    return trim(a * c for a in p)


def mul(p: QPoly, q: QPoly) -> QPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def derivative(p: QPoly) -> QPoly:
    return trim(i * c for i, c in enumerate(p) if i > 0)


def divmod_poly(p: QPoly, d: QPoly) -> tuple[QPoly, QPoly]:
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    q = [Fraction(0)] * max(0, len(p) - len(d) + 1)
    lead = d[-1]
    while len(r) >= len(d) and r:
        shift = len(r) - len(d)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(d):
            r[shift + i] -= f * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return trim(q), trim(r)


def monic(p: QPoly) -> QPoly:
    return scale(p, 1 / p[-1]) if p else p


def gcd(p: QPoly, q: QPoly) -> QPoly:
    while q:
        p, q = q, divmod_poly(p, q)[1]
    return monic(p)


def primitive_positive(p: QPoly) -> QPoly:
    """p divided by a positive rational so the coefficients are coprime integers."""
    if not p:
        return p
    den = math.lcm(*(c.denominator for c in p))
    ints = [c.numerator * (den // c.denominator) for c in p]
    g = math.gcd(*ints)
    return tuple(Fraction(v // g) for v in ints)


def squarefree(p: QPoly) -> QPoly:
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return p
    return divmod_poly(p, g)[0]


def strip_x_power(p: QPoly) -> tuple[QPoly, int]:
    m = 0
    while m < len(p) and p[m] == 0:
        m += 1
    return p[m:], m


def rational_roots(p: QPoly, limit: int = 10**12) -> list[Fraction]:
    """All rational roots of p (rational root theorem); skips huge coefficients."""
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial")
    roots = []
    q, m = strip_x_power(p)
    if m:
        roots.append(Fraction(0))
    if len(q) <= 1:
        return roots
    ints = primitive_positive(q)
    a0, an = abs(int(ints[0])), abs(int(ints[-1]))
    if a0 > limit or an > limit:
        return roots
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and evaluate(q, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def format_qpoly(p: QPoly) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        text += f" {s} {b}"
    return text


# --- Sturm chains -----------------------------------------------------------


@dataclass(frozen=True)
class SturmChain:
    polys: tuple[QPoly, ...]

    def variations(self, x: Fraction) -> int:
        signs = [s for s in (sign_at(p, x) for p in self.polys) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def __len__(self) -> int:
        return len(self.polys)


def sturm_chain(p) -> SturmChain:
    """Signed remainder sequence of the squarefree part of p."""
    p = as_qpoly(p)
    if not p:
        raise ValueError("Sturm chain of the zero polynomial")
    p = squarefree(p)
    chain = [p]
    d = derivative(p)
    if d:
        chain.append(d)
        while True:
            r = divmod_poly(chain[-2], chain[-1])[1]
            if not r:
                break
            chain.append(primitive_positive(neg(r)))
    return SturmChain(tuple(chain))


def count_roots(p, a, b) -> int:
    """Number of distinct real roots of p in (a, b]."""
    a, b = as_fraction(a), as_fraction(b)
    if a >= b:
        raise ValueError("need a < b")
    chain = sturm_chain(p)
    return chain.variations(a) - chain.variations(b)


# --- sign proofs ------------------------------------------------------------


@dataclass
class PositivityVerdict:
    outcome: str  # proved | refuted | zero-at-endpoint | indeterminate
    relation: str
    lo: Fraction
    hi: Fraction
    right_closed: bool
    factored_zero_multiplicity: int = 0
    witness: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.outcome == "proved"

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "outcome": self.outcome,
            "relation": self.relation,
            "interval": {"lo": fraction_str(self.lo), "hi": fraction_str(self.hi), "right_closed": self.right_closed},
            "factored_zero_multiplicity": self.factored_zero_multiplicity,
            "witness": {
                "root_count": w.get("root_count"),
                "sample": fraction_str(w["sample"]) if w.get("sample") is not None else None,
                "sample_value": fraction_str(w["sample_value"]) if w.get("sample_value") is not None else None,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> PositivityVerdict:
        w = d.get("witness") or {}
        iv = d["interval"]
        return cls(
            outcome=d["outcome"],
            relation=d["relation"],
            lo=Fraction(iv["lo"]),
            hi=Fraction(iv["hi"]),
            right_closed=bool(iv["right_closed"]),
            factored_zero_multiplicity=int(d["factored_zero_multiplicity"]),
            witness={
                "root_count": w.get("root_count"),
                "sample": Fraction(w["sample"]) if w.get("sample") is not None else None,
                "sample_value": Fraction(w["sample_value"]) if w.get("sample_value") is not None else None,
            },
        )


def _interior_sample(q: QPoly, a: Fraction, b: Fraction) -> Fraction:
    # midpoint, then dyadic points until one is not a root
    denom = 2
    while True:
        for k in range(1, denom, 2):
            t = a + (b - a) * Fraction(k, denom)
            if evaluate(q, t) != 0:
                return t
        denom *= 2


def prove_sign(p, lo, hi, relation: str = STRICTLY_POSITIVE, right_closed: bool = True) -> PositivityVerdict:
    """Decide whether p has the strict sign ``relation`` on (lo, hi] or (lo, hi).

    When lo == 0 the factor x**m is removed first (it is positive on the
    interval), so polynomials vanishing at the open end are handled.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    p = as_qpoly(p)
    lo, hi = as_fraction(lo), as_fraction(hi)
    if not p:
        raise ValueError("cannot decide the sign of the zero polynomial")
    if lo >= hi:
        raise ValueError("need lo < hi")
    m = 0
    q = p
    if lo == 0:
        q, m = strip_x_power(p)
    want = 1 if relation == STRICTLY_POSITIVE else -1

    roots = count_roots(q, lo, hi)
    end_root = evaluate(q, hi) == 0
    interior = roots - (1 if end_root else 0)
    sample = _interior_sample(q, lo, hi)
    witness = {"root_count": roots, "sample": sample, "sample_value": evaluate(p, sample)}
    verdict = PositivityVerdict("proved", relation, lo, hi, right_closed, m, witness)
    if interior > 0:
        verdict.outcome = "refuted"
    elif end_root and right_closed:
        verdict.outcome = "zero-at-endpoint"
    elif sign_at(q, sample) != want:
        verdict.outcome = "refuted"
    return verdict


def recheck_verdict(p, verdict: PositivityVerdict) -> bool:
    """Recompute a verdict from scratch and compare every recorded field."""
    try:
        fresh = prove_sign(p, verdict.lo, verdict.hi, verdict.relation, verdict.right_closed)
    except ValueError:
        return False
    return (
        fresh.outcome == verdict.outcome
        and fresh.factored_zero_multiplicity == verdict.factored_zero_multiplicity
        and fresh.witness == verdict.witness
    )


def classify_sign_open(p, lo, hi) -> int:
    """+1 if p > 0 on (lo, hi), -1 if p < 0 there, 0 if neither can be shown."""
    p = as_qpoly(p)
    if not p:
        return 0
    for want, rel in ((1, STRICTLY_POSITIVE), (-1, STRICTLY_NEGATIVE)):
        if prove_sign(p, lo, hi, rel, right_closed=False).proved:
            return want
    return 0


def coefficient_list(p: Sequence) -> list[str]:
    return [fraction_str(Fraction(c)) for c in p]
