"""Proof search for MTP inequalities on subintervals of (0, pi/2).

Each piece of the interval is handled by replacing every term with a
Taylor polynomial bound chosen from the sign of its coefficient, rounding
the resulting Q[pi] polynomial down to rationals and deciding positivity
with a Sturm chain. The right end near pi/2 is handled on the reflected
expression x -> pi/2 - x.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import sturm
from .corpus import HALF_PI, InequalityProblem
from .expr import MTPExpression, XPolynomial, eval_enclosure, format_expr, parse, reflect_half_pi
from .numeric import PiPolynomial, RationalInterval, fraction_str, half_pi_enclosure, round_directed
from .taylor import (
    FactorBoundIndefinite,
    SignIndefinite,
    TermBound,
    omitted_term_magnitude,
    term_bound_detail,
)

log = logging.getLogger(__name__)

CERTIFICATE_FORMAT = "mtprove-certificate/1"
DEFAULT_SPLITS = (Fraction(27, 20), Fraction(9, 25))
COVERAGE_BITS = 64
MIN_PIECE_WIDTH = Fraction(1, 1024)


class ProofFailure(Exception):
    pass


class Disproved(ProofFailure):
    """A rational point where a certified enclosure violates the relation."""

    def __init__(self, point: Fraction, enclosure: RationalInterval):
        super().__init__(f"disproved at x = {point}: value in [{float(enclosure.lo):.6g}, {float(enclosure.hi):.6g}]")
        self.point = point
        self.enclosure = enclosure


class GaveUp(ProofFailure):
    pass


@dataclass
class ProverConfig:
    max_taylor_degree: int = 20
    # "default" tries (27/20, 9/25) first; a pair of rationals sets (direct, reflected)
    split_schedule: object = "default"
    rationalization_gap: Fraction = Fraction(1, 10**6)
    precision_bits: int = 60
    max_pieces: int = 64
    scan_points: int = 64

    def __post_init__(self):
        if self.max_taylor_degree < 1:
            raise ValueError("max_taylor_degree must be >= 1")
        self.rationalization_gap = Fraction(self.rationalization_gap)
        if self.rationalization_gap <= 0:
            raise ValueError("rationalization_gap must be positive")
        if self.split_schedule not in ("default", "auto-bisect"):
            s1, s2 = self.split_schedule
            self.split_schedule = (Fraction(s1), Fraction(s2))


@dataclass
class ProofPiece:
    lo: Fraction
    hi: Fraction
    right_closed: bool
    reflected: bool
    taylor_degrees: dict
    term_bounds: list
    exact_bound_poly: XPolynomial
    rationalized_poly: tuple
    gap: Fraction
    verdict: sturm.PositivityVerdict

    def to_dict(self) -> dict:
        return {
            "interval": {"lo": fraction_str(self.lo), "hi": fraction_str(self.hi), "right_closed": self.right_closed},
            "reflected": self.reflected,
            "taylor_degrees": {k: self.taylor_degrees[k] for k in sorted(self.taylor_degrees)},
            "term_bounds": [_term_record(tb) for tb in self.term_bounds],
            "exact_bound_poly": xpoly_to_json(self.exact_bound_poly),
            "rationalized_poly": sturm.coefficient_list(self.rationalized_poly),
            "rationalization_gap": fraction_str(self.gap),
            "verdict": self.verdict.to_dict(),
        }


def _term_record(tb) -> dict:
    if isinstance(tb, dict):
        return tb
    return {
        "sin_pow": tb.term.sin_pow,
        "cos_pow": tb.term.cos_pow,
        "coeff_sign": int(tb.coeff_sign),
        "need": tb.need,
        "factors": [
            {"function": f.function, "lower_degree": f.lower_degree, "upper_degree": f.upper_degree} for f in tb.factors
        ],
    }


def xpoly_to_json(p: XPolynomial) -> list:
    return [[fraction_str(c) for c in pc.coefficients] for pc in p.coefficients]


def xpoly_from_json(data) -> XPolynomial:
    return XPolynomial([PiPolynomial([Fraction(c) for c in row]) for row in data])


def endpoint_str(e) -> str:
    return HALF_PI if e == HALF_PI else fraction_str(Fraction(e))


@dataclass
class ProofCertificate:
    problem: InequalityProblem
    orientation: int
    pieces: list = field(default_factory=list)
    coverage: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format": CERTIFICATE_FORMAT,
            "problem": {
                "name": self.problem.name,
                "expression": format_expr(self.problem.expr),
                "relation": self.problem.relation,
                "interval": {"lo": endpoint_str(self.problem.lo), "hi": endpoint_str(self.problem.hi)},
            },
            "orientation": self.orientation,
            "config": self.config,
            "pieces": [p.to_dict() if isinstance(p, ProofPiece) else p for p in self.pieces],
            "coverage": self.coverage,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"{self.problem.name or 'problem'}: {self.problem.relation} on "
                 f"({self.problem.lo}, {self.problem.hi}) proved with {len(self.pieces)} piece(s)"]
        for p in self.pieces:
            kind = "reflected" if p.reflected else "direct"
            degs = ", ".join(f"{k} {v}" for k, v in sorted(p.taylor_degrees.items())) or "none"
            close = "]" if p.right_closed else ")"
            lines.append(f"  {kind:9s} ({p.lo}, {p.hi}{close}  degrees: {degs}")
        return "\n".join(lines)


def problem_from_dict(d: dict) -> InequalityProblem:
    iv = d["interval"]
    hi = iv["hi"] if iv["hi"] == HALF_PI else Fraction(iv["hi"])
    return InequalityProblem(parse(d["expression"]), d["relation"], Fraction(iv["lo"]), hi, d.get("name", ""))


# --- piece construction -----------------------------------------------------


@dataclass
class _Attempt:
    piece: ProofPiece | None = None
    split_points: tuple = ()


def _candidate(expr: MTPExpression, lo: Fraction, hi: Fraction, right_closed: bool, floors: dict, gap: Fraction):
    """Bound every term from below, sum, rationalise and decide the sign.

    Returns (piece or None, degrees used).
    """
    bounds: list[TermBound] = [term_bound_detail(t, "lower", (lo, hi), floors) for t in expr.terms]
    total = XPolynomial()
    degrees: dict[str, int] = {}
    for tb in bounds:
        total = total + tb.poly
        for k, v in tb.degrees_used().items():
            degrees[k] = max(degrees.get(k, -1), v)
    rational = sturm.trim(
        Fraction(0) if c.is_zero() else round_directed(c, "lower", gap) for c in total.coefficients
    )
    if not rational:
        return None, degrees
    verdict = sturm.prove_sign(rational, lo, hi, sturm.STRICTLY_POSITIVE, right_closed)
    if not verdict.proved:
        return None, degrees
    return ProofPiece(lo, hi, right_closed, False, degrees, bounds, total, rational, gap, verdict), degrees


def _functions_of(expr: MTPExpression) -> list[str]:
    out = []
    if any(t.sin_pow for t in expr.terms):
        out.append("sin")
    if any(t.cos_pow for t in expr.terms):
        out.append("cos")
    return out


def attempt_piece(expr: MTPExpression, lo: Fraction, hi: Fraction, right_closed: bool, config: ProverConfig) -> _Attempt:
    """Try one interval, escalating Taylor degrees greedily."""
    floors = {f: 0 for f in _functions_of(expr)}
    cap = config.max_taylor_degree
    while True:
        try:
            piece, used = _candidate(expr, lo, hi, right_closed, floors, config.rationalization_gap)
        except SignIndefinite as exc:
            return _Attempt(split_points=tuple(exc.split_points))
        except FactorBoundIndefinite:
            # a truncated factor dipped below zero; a longer truncation may fix it
            used = {f: max(floors[f], 1) for f in floors}
            piece = None
        except ValueError as exc:
            # truncation degree beyond what is representable
            log.debug("piece (%s, %s): %s", lo, hi, exc)
            return _Attempt()
        if piece is not None:
            return _Attempt(piece)
        options = []
        for f in sorted(used):
            d = used[f]
            if d + 4 > cap:  # next truncation on the same side
                continue
            options.append((omitted_term_magnitude(f, d, hi), f, d))
        if not options:
            return _Attempt()
        _, f, d = max(options)
        floors[f] = d + 1
        log.debug("piece (%s, %s): raising %s past degree %d", lo, hi, f, d)


# --- driver -----------------------------------------------------------------


def _scan(expr: MTPExpression, lo: Fraction, hi: Fraction, n: int, bits: int, orientation: int = 1) -> None:
    """Raise Disproved if a certified enclosure is <= 0 at some grid point.

    The reported enclosure is of the original expression (orientation undone).
    """
    for i in range(1, n):
        x = lo + (hi - lo) * Fraction(i, n)
        v = eval_enclosure(expr, RationalInterval(x), bits)
        if v.hi <= 0:
            raise Disproved(x, v if orientation > 0 else -v)


def _initial_splits(problem: InequalityProblem, config: ProverConfig, half_pi: RationalInterval):
    if config.split_schedule == "default":
        s1, s2 = DEFAULT_SPLITS
    elif config.split_schedule == "auto-bisect":
        s1, s2 = Fraction(1), Fraction(3, 4)
    else:
        s1, s2 = config.split_schedule
    # keep the reflected piece inside the problem interval
    room = half_pi.lo - problem.lo
    if s2 >= room:
        s2 = room / 2
    if not s1 > half_pi.hi - s2:
        s1 = (half_pi.hi - s2 + half_pi.lo) / 2
    if not s1 > problem.lo:
        raise GaveUp("split point does not lie inside the interval")
    return s1, s2


def _covers(pieces: list[ProofPiece], lo: Fraction, reflected: bool) -> Fraction:
    """Right end of the contiguous union of pieces starting at lo."""
    reach = lo
    for p in sorted((p for p in pieces if p.reflected == reflected), key=lambda p: (p.lo, p.hi)):
        if p.lo <= reach:
            reach = max(reach, p.hi)
    return reach


def coverage_record(problem: InequalityProblem, pieces: list[ProofPiece]) -> dict:
    direct = _covers(pieces, problem.lo, False)
    if problem.hi == HALF_PI:
        reflected = _covers(pieces, Fraction(0), True)
        hp = half_pi_enclosure(COVERAGE_BITS)
        ok = reflected > 0 and direct > hp.hi - reflected
        return {
            "direct_reach": fraction_str(direct),
            "reflected_reach": fraction_str(reflected),
            "half_pi_upper": fraction_str(hp.hi),
            "covered": bool(ok),
        }
    return {
        "direct_reach": fraction_str(direct),
        "reflected_reach": None,
        "half_pi_upper": None,
        "covered": bool(direct >= problem.hi),
    }


def prove(problem: InequalityProblem, config: ProverConfig | None = None) -> ProofCertificate:
    config = config or ProverConfig()
    orientation = 1 if problem.relation == sturm.STRICTLY_POSITIVE else -1
    target = problem.expr if orientation > 0 else -problem.expr
    half_pi = half_pi_enclosure(COVERAGE_BITS)
    hi_rational = half_pi.lo if problem.hi == HALF_PI else problem.hi
    bits = config.precision_bits

    _scan(target, problem.lo, hi_rational, config.scan_points, bits, orientation)

    # work items: (reflected, lo, hi, right_closed)
    if problem.hi == HALF_PI:
        s1, s2 = _initial_splits(problem, config, half_pi)
        queue = [(False, problem.lo, s1, True), (True, Fraction(0), s2, True)]
        reflected_expr = reflect_half_pi(target)
    else:
        queue = [(False, problem.lo, problem.hi, False)]
        reflected_expr = None

    done: list[ProofPiece] = []
    attempts = 0
    while queue:
        reflected, lo, hi, closed = queue.pop(0)
        attempts += 1
        if attempts > config.max_pieces:
            raise _gave_up(target, problem, hi_rational, bits, "piece budget exhausted")
        expr = reflected_expr if reflected else target
        result = attempt_piece(expr, lo, hi, closed, config)
        if result.piece is not None:
            result.piece.reflected = reflected
            done.append(result.piece)
            continue
        if hi - lo < MIN_PIECE_WIDTH:
            raise _gave_up(target, problem, hi_rational, bits, f"no bound found on ({lo}, {hi})")
        points = [p for p in result.split_points if lo < p < hi] or [(lo + hi) / 2]
        ends = [lo, *sorted(points), hi]
        for i, (a, b) in enumerate(zip(ends, ends[1:])):
            queue.append((reflected, a, b, True if i < len(ends) - 2 else closed))
        log.debug("split (%s, %s) at %s", lo, hi, points)

    done.sort(key=lambda p: (p.reflected, p.lo, p.hi))
    coverage = coverage_record(problem, done)
    if not coverage["covered"]:
        raise GaveUp("pieces do not cover the interval")
    cfg = {
        "max_taylor_degree": config.max_taylor_degree,
        "split_schedule": config.split_schedule if isinstance(config.split_schedule, str)
        else [fraction_str(s) for s in config.split_schedule],
        "rationalization_gap": fraction_str(config.rationalization_gap),
        "precision_bits": config.precision_bits,
    }
    return ProofCertificate(problem, orientation, done, coverage, cfg)


def _gave_up(target, problem, hi_rational, bits, reason) -> ProofFailure:
    # a finer scan may still expose a counterexample
    try:
        _scan(target, problem.lo, hi_rational, 512, bits, 1 if problem.relation == sturm.STRICTLY_POSITIVE else -1)
    except Disproved as exc:
        return exc
    return GaveUp(reason)
