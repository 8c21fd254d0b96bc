"""The four MTP inequalities behind the refined Cusa-Huygens bounds, and the
reduction of each bound to MTP form.

Each bound has the shape

    Z(x) = (2 + cos x)/3 - (2/3 - 2/pi) * U(x)

and "Z < sinc" (lower bound) or "sinc < Z" (upper bound) is multiplied by
x and by the positive denominators 3*pi*d_U, leaving an MTP inequality
with coefficients in Q[pi].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import MTPExpression, XPolynomial, normalize, parse
from .numeric import PiPolynomial, Sign, sign_of
from .sturm import STRICTLY_NEGATIVE, STRICTLY_POSITIVE

HALF_PI = "pi/2"

# f3's sin coefficient carries a factor x on the 2(pi - 3) part; without it the
# expression is negative near pi/2 and disagrees with the reduction.
CASE_TEXT = {
    "f1": "((12 - 4*pi)*x + 3*pi^2 - 6*pi)*sin(x) - pi*(pi - 2)*x*cos(x) + x*((4*pi - 12)*x - 2*pi^2 + 4*pi)",
    "f2": (
        "-8*x*(pi - 3)*cos(x)^2 - pi*x*(pi - 2)^2*cos(x) + ((48 - 16*pi)*x^2 + 3*pi*(pi - 2)^2)*sin(x)"
        " - 2*pi^3*x + 8*pi*x^3 + 8*pi^2*x - 24*x^3 - 24*x"
    ),
    "f3": "(2*(pi - 3)*x + 3*pi)*sin(x) + x*(-2*(pi - 3)*x - pi)*cos(x) - 2*pi*x",
    "f4": (
        "-4*x^2*(pi - 3)*sin(x)*cos(x) + 3*pi*sin(x) + 2*x*(x^2 - 1)*(pi - 3)*cos(x)^2"
        " - pi*x*cos(x) - 6*x"
    ),
}

CASE_RELATION = {
    "f1": STRICTLY_POSITIVE,
    "f2": STRICTLY_NEGATIVE,
    "f3": STRICTLY_POSITIVE,
    "f4": STRICTLY_NEGATIVE,
}

REDUCTIONS = {
    ("T1", "lower"): "f1",
    ("T1", "upper"): "f2",
    ("T2", "lower"): "f3",
    ("T2", "upper"): "f4",
}


@dataclass(frozen=True)
class InequalityProblem:
    """expr <relation> 0 for every x in the open interval (lo, hi)."""

    expr: MTPExpression
    relation: str
    lo: Fraction = Fraction(0)
    hi: object = HALF_PI  # Fraction or HALF_PI
    name: str = ""

    def __post_init__(self):
        if self.relation not in (STRICTLY_POSITIVE, STRICTLY_NEGATIVE):
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.lo < 0:
            raise ValueError("interval must lie in (0, pi/2]")
        if self.hi != HALF_PI:
            if not isinstance(self.hi, Fraction):
                object.__setattr__(self, "hi", Fraction(self.hi))
            if not (self.lo < self.hi <= Fraction(3, 2)):
                # rational right ends must sit below pi/2; 3/2 is a safe rational cap
                from .numeric import half_pi_enclosure

                if not (self.lo < self.hi < half_pi_enclosure(64).lo):
                    raise ValueError(f"interval ({self.lo}, {self.hi}) is not inside (0, pi/2)")


def build_case(case_id: str) -> InequalityProblem:
    if case_id not in CASE_TEXT:
        raise ValueError(f"unknown case {case_id!r}; expected one of {sorted(CASE_TEXT)}")
    return InequalityProblem(parse(CASE_TEXT[case_id]), CASE_RELATION[case_id], name=case_id)


_PI = PiPolynomial.pi()


def _upsilon(theorem: str, side: str) -> tuple[MTPExpression, PiPolynomial]:
    """Correction term U = numerator / denominator with denominator in Q[pi], positive."""
    x, s, c = MTPExpression.x(), MTPExpression.sin(), MTPExpression.cos()
    if theorem == "T1":
        # (x - sin x) / (pi/2 - 1) = 2 (x - sin x) / (pi - 2)
        base = (x - s) * 2
        den = _PI - 2
    elif theorem == "T2":
        base = s - x * c
        den = PiPolynomial([1])
    else:
        raise ValueError(f"unknown theorem {theorem!r}")
    if side == "lower":
        return base, den
    if side == "upper":
        return base * base, den * den
    raise ValueError(f"unknown side {side!r}")


def reduce_bound_to_mtp(theorem: str, side: str) -> InequalityProblem:
    """MTP form of the theorem's lower (Z < sinc) or upper (sinc < Z) bound.

    x * (sinc - Z) * 3*pi*d = 3*pi*d*sin x - pi*d*x*(2 + cos x) + (2*pi - 6)*x*N
    where U = N/d and 2/3 - 2/pi = (2*pi - 6)/(3*pi).
    """
    num, den = _upsilon(theorem, side)
    x, s, c = MTPExpression.x(), MTPExpression.sin(), MTPExpression.cos()
    expr = s * (den * 3 * _PI) - x * (c + 2) * (den * _PI) + x * num * (2 * _PI - 6)
    relation = STRICTLY_POSITIVE if side == "lower" else STRICTLY_NEGATIVE
    return InequalityProblem(expr, relation, name=f"{theorem}-{side}")


def positive_scalar_multiple(a: MTPExpression, b: MTPExpression) -> PiPolynomial | None:
    """If a = lam * b for a positive lam in Q(pi), return lam's numerator ratio witness.

    Expressions are compared after rewriting sin^2 as 1 - cos^2. The check is
    cross-multiplication: a * lc(b) == b * lc(a), with lc(a), lc(b) of equal sign.
    Returns lc(a) * lc(b) (positive) on success, None otherwise.
    """
    a = normalize(a, reduce_sin_powers=True)
    b = normalize(b, reduce_sin_powers=True)
    if a.is_zero() or b.is_zero():
        return None
    if a.keys() != b.keys():
        return None
    ta, tb = a.terms[0], b.terms[0]
    i = tb.coeff.valuation()
    la, lb = ta.coeff.coefficients[i] if i < len(ta.coeff.coefficients) else PiPolynomial(), tb.coeff.coefficients[i]
    if la.is_zero():
        return None
    if (a * lb - b * la).is_zero() and sign_of(la) == sign_of(lb) != Sign.ZERO:
        return la * lb
    return None


def reduction_matches(theorem: str, side: str) -> bool:
    red = reduce_bound_to_mtp(theorem, side)
    case = build_case(REDUCTIONS[(theorem, side)])
    return red.relation == case.relation and positive_scalar_multiple(red.expr, case.expr) is not None
