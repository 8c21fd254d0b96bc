"""Independent re-checking of proof certificates.

Nothing here calls the proof search or the Taylor-bound builder. Every
recorded bound is rebuilt from the Maclaurin coefficients at the recorded
degrees, signs are re-decided with Sturm chains, and Q[pi] comparisons go
through ``sign_of``. The only shared code is exact arithmetic, the Sturm
machinery and the expression parser.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

from . import sturm
from .expr import MTPExpression, XPolynomial, parse, reflect_half_pi
from .numeric import PiPolynomial, Sign, half_pi_enclosure, round_directed, sign_of

HALF_PI = "pi/2"
COVERAGE_BITS = 64


def _maclaurin(function: str, degree: int) -> tuple:
    out = []
    for k in range(degree + 1):
        if function == "sin" and k % 2 == 1:
            out.append(Fraction((-1) ** (k // 2), factorial(k)))
        elif function == "cos" and k % 2 == 0:
            out.append(Fraction((-1) ** (k // 2), factorial(k)))
        else:
            out.append(Fraction(0))
    return sturm.trim(out)


def _is_lower(function: str, degree: int) -> bool:
    # on [0, 2] the alternating tail makes these truncations minorants
    return degree % 4 == (3 if function == "sin" else 2)


def _is_upper(function: str, degree: int) -> bool:
    return degree % 4 == (1 if function == "sin" else 0)


def _open_sign(p: tuple, lo: Fraction, hi: Fraction) -> int:
    return sturm.classify_sign_open(p, lo, hi) if p else 0


def _coeff_sign(coeff: XPolynomial, lo: Fraction, hi: Fraction, gap=Fraction(1, 10**15)) -> int:
    """Certified sign of a Q[pi][x] coefficient on (lo, hi), or 0 if unknown."""
    if coeff.is_zero():
        return 0
    if coeff.degree == 0:
        return int(sign_of(coeff.coefficients[0]))
    comps = [c for c in coeff.pi_components() if c]
    g: tuple = ()
    for c in comps:
        g = sturm.gcd(g, c) if g else sturm.monic(c)
    g_sign = 1
    if len(g) > 1:
        g_sign = _open_sign(g, lo, hi)
        if not g_sign:
            return 0
    parts = [sturm.divmod_poly(c, g)[0] if c else () for c in coeff.pi_components()]
    width = max(len(c) for c in parts)
    h = [PiPolynomial([c[i] if i < len(c) else 0 for c in parts]) for i in range(width)]
    low = sturm.trim(round_directed(c, "lower", gap) if not c.is_zero() else 0 for c in h)
    high = sturm.trim(round_directed(c, "upper", gap) if not c.is_zero() else 0 for c in h)
    if low and sturm.prove_sign(low, lo, hi, sturm.STRICTLY_POSITIVE, False).proved:
        return g_sign
    if high and sturm.prove_sign(high, lo, hi, sturm.STRICTLY_NEGATIVE, False).proved:
        return -g_sign
    return 0


def _trig_bound(record: dict, lo: Fraction, hi: Fraction, problems: list, where: str):
    factors = record["factors"]
    need = record["need"]

    def poly(i: int, side: str):
        f = factors[i]
        d = f[f"{side}_degree"]
        if d is None:
            problems.append(f"{where}: factor {i} has no {side} degree")
            return None
        ok = _is_lower(f["function"], d) if side == "lower" else _is_upper(f["function"], d)
        if not ok:
            problems.append(f"{where}: {f['function']} degree {d} is not a {side} bound")
            return None
        return _maclaurin(f["function"], d)

    if len(factors) == 1:
        return poly(0, need)
    if any(f["function"] == "cos" for f in factors) and not hi <= half_pi_enclosure(COVERAGE_BITS).lo:
        problems.append(f"{where}: cos factor not certified non-negative")
        return None
    uppers = [poly(i, "upper") for i in range(len(factors))]
    if any(u is None for u in uppers):
        return None
    if need == "upper":
        out = (Fraction(1),)
        for u in uppers:
            out = sturm.mul(out, u)
        return out
    acc_lo = poly(0, "lower")
    acc_hi = uppers[0]
    if acc_lo is None:
        return None
    for i in range(1, len(factors)):
        s = _open_sign(acc_lo, lo, hi)
        if s < 0:
            new = sturm.mul(acc_lo, uppers[i])
        elif s > 0:
            li = poly(i, "lower")
            if li is None:
                return None
            si = _open_sign(li, lo, hi)
            if si == 0:
                problems.append(f"{where}: lower bound of factor {i} has no sign")
                return None
            new = sturm.mul(acc_lo, li) if si > 0 else sturm.mul(acc_hi, li)
        else:
            problems.append(f"{where}: partial product has no sign")
            return None
        acc_hi = sturm.mul(acc_hi, uppers[i])
        acc_lo = new
    return acc_lo


def _covered_reach(pieces: list, lo: Fraction, reflected: bool) -> Fraction:
    reach = lo
    spans = sorted((Fraction(p["interval"]["lo"]), Fraction(p["interval"]["hi"])) for p in pieces if p["reflected"] == reflected)
    for a, b in spans:
        if a <= reach:
            reach = max(reach, b)
    return reach


def _check_piece(i: int, piece: dict, target: MTPExpression, reflected_target, problems: list) -> None:
    where = f"piece {i}"
    iv = piece["interval"]
    lo, hi, closed = Fraction(iv["lo"]), Fraction(iv["hi"]), bool(iv["right_closed"])
    if not (0 <= lo < hi <= 2):
        problems.append(f"{where}: interval ({lo}, {hi}) outside [0, 2]")
        return
    expr = target
    if piece["reflected"]:
        if reflected_target is None:
            problems.append(f"{where}: reflected piece for a rational interval")
            return
        expr = reflected_target
    records = {(r["sin_pow"], r["cos_pow"]): r for r in piece["term_bounds"]}
    if sorted(records) != sorted(expr.keys()) or len(records) != len(piece["term_bounds"]):
        problems.append(f"{where}: term records do not match the expression")
        return

    total = XPolynomial()
    for t in expr.terms:
        rec = records[t.key]
        if not t.sin_pow and not t.cos_pow:
            if (rec["coeff_sign"], rec["need"], rec["factors"]) != (0, "none", []):
                problems.append(f"{where}: polynomial term carries a trig bound record")
            total = total + t.coeff
            continue
        s = _coeff_sign(t.coeff, lo, hi)
        if s == 0 or s != rec["coeff_sign"]:
            problems.append(f"{where}: coefficient sign of {t.key} not certified as {rec['coeff_sign']}")
            continue
        want = "lower" if s > 0 else "upper"
        if rec["need"] != want:
            problems.append(f"{where}: term {t.key} uses a {rec['need']} bound, needs {want}")
            continue
        funcs = [f["function"] for f in rec["factors"]]
        if funcs != ["sin"] * t.sin_pow + ["cos"] * t.cos_pow:
            problems.append(f"{where}: factor list of {t.key} is wrong")
            continue
        trig = _trig_bound(rec, lo, hi, problems, f"{where} term {t.key}")
        if trig is None:
            continue
        total = total + t.coeff * XPolynomial.from_rationals(trig)

    recorded = XPolynomial([PiPolynomial([Fraction(c) for c in row]) for row in piece["exact_bound_poly"]])
    if recorded != total:
        problems.append(f"{where}: exact bound polynomial does not match the recomputed bound")

    gap = Fraction(piece["rationalization_gap"])
    rational = sturm.trim(Fraction(c) for c in piece["rationalized_poly"])
    n = max(len(rational), len(total.coefficients))
    for k in range(n):
        c = total.coefficients[k] if k < len(total.coefficients) else PiPolynomial()
        r = rational[k] if k < len(rational) else Fraction(0)
        below = sign_of(c - r)
        within = sign_of(PiPolynomial([r + gap]) - c)
        if below == Sign.NEGATIVE:
            problems.append(f"{where}: x^{k} rational coefficient exceeds the exact one")
        if within != Sign.POSITIVE:
            problems.append(f"{where}: x^{k} rational coefficient is not within the gap")

    verdict = sturm.PositivityVerdict.from_dict(piece["verdict"])
    if verdict.outcome != "proved" or verdict.relation != sturm.STRICTLY_POSITIVE:
        problems.append(f"{where}: verdict is not a positivity proof")
    if (verdict.lo, verdict.hi, verdict.right_closed) != (lo, hi, closed):
        problems.append(f"{where}: verdict interval differs from the piece")
    if not rational or not sturm.recheck_verdict(rational, verdict):
        problems.append(f"{where}: Sturm verdict does not re-check")


def diagnose(cert) -> list[str]:
    """Every problem found in a certificate (empty list means valid)."""
    if hasattr(cert, "to_dict"):
        cert = cert.to_dict()
    elif isinstance(cert, str):
        cert = json.loads(cert)
    problems: list[str] = []
    try:
        prob = cert["problem"]
        expr = parse(prob["expression"])
        relation = prob["relation"]
        orientation = 1 if relation == sturm.STRICTLY_POSITIVE else -1
        if relation not in sturm.RELATIONS or cert["orientation"] != orientation:
            problems.append("orientation does not match the relation")
        target = expr if orientation > 0 else -expr
        lo = Fraction(prob["interval"]["lo"])
        hi_text = prob["interval"]["hi"]
        reflected_target = reflect_half_pi(target) if hi_text == HALF_PI else None
        pieces = cert["pieces"]
        if not pieces:
            problems.append("no pieces")
        for i, piece in enumerate(pieces):
            _check_piece(i, piece, target, reflected_target, problems)

        direct = _covered_reach(pieces, lo, False)
        if hi_text == HALF_PI:
            reflected = _covered_reach(pieces, Fraction(0), True)
            hp = half_pi_enclosure(COVERAGE_BITS)
            covered = reflected > 0 and direct > hp.hi - reflected
        else:
            covered = direct >= Fraction(hi_text)
            if any(p["reflected"] for p in pieces):
                problems.append("reflected piece in a rational interval")
            last = [p for p in pieces if Fraction(p["interval"]["hi"]) > Fraction(hi_text)]
            if last:
                problems.append("piece extends past the interval")
        if not covered:
            problems.append("pieces do not cover the interval")
        if bool(cert["coverage"].get("covered")) != covered:
            problems.append("recorded coverage flag disagrees")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        problems.append(f"malformed certificate: {exc!r}")
    return problems


def verify_certificate(cert) -> bool:
    return not diagnose(cert)
