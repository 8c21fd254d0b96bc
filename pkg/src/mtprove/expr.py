"""Mixed trigonometric polynomials: sums of p(x) * sin(x)^a * cos(x)^b with
p in Q[pi][x].

Includes the text front-end (parser and canonical printer), interval
evaluation, and the x -> pi/2 - x reflection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .numeric import (
    Number,
    PiPolynomial,
    RationalInterval,
    as_fraction,
    pi_enclosure,
)


class XPolynomial:
    """Polynomial in x with Q[pi] coefficients; ``coefficients[i]`` multiplies x**i."""

    __slots__ = ("coefficients", "_hash")

    def __init__(self, coefficients: Sequence = ()):
        coeffs = [c if isinstance(c, PiPolynomial) else PiPolynomial([as_fraction(c)]) for c in coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coefficients: tuple[PiPolynomial, ...] = tuple(coeffs)
        self._hash = None

    @classmethod
    def x(cls) -> XPolynomial:
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> XPolynomial:
        return cls([c])

    @classmethod
    def from_rationals(cls, coeffs: Iterable[Number]) -> XPolynomial:
        return cls([PiPolynomial([c]) for c in coeffs])

    @staticmethod
    def _coerce(other) -> XPolynomial:
        if isinstance(other, XPolynomial):
            return other
        return XPolynomial([other])

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def valuation(self) -> int:
        """Multiplicity of the root at x = 0."""
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                return i
        raise ValueError("zero polynomial has no valuation")

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coefficients)

    def rational_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients as rationals; raises if any coefficient involves pi."""
        return tuple(c.rational_value() for c in self.coefficients)

    def pi_components(self) -> list[tuple[Fraction, ...]]:
        """Split as sum_j pi**j * c_j(x); returns the rational polynomials c_j."""
        width = max((len(c.coefficients) for c in self.coefficients), default=0)
        out = []
        for j in range(width):
            comp = [c.coefficients[j] if j < len(c.coefficients) else Fraction(0) for c in self.coefficients]
            while comp and comp[-1] == 0:
                comp.pop()
            out.append(tuple(comp))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, XPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coefficients)
        return self._hash

    def __neg__(self) -> XPolynomial:
        return XPolynomial([-c for c in self.coefficients])

    def __add__(self, other) -> XPolynomial:
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return XPolynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> XPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> XPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> XPolynomial:
        if not isinstance(other, XPolynomial):
            c = other if isinstance(other, PiPolynomial) else PiPolynomial([as_fraction(other)])
            return XPolynomial([a * c for a in self.coefficients])
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return XPolynomial()
        out = [PiPolynomial()] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
        return XPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> XPolynomial:
        result = XPolynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def compose(self, inner: XPolynomial) -> XPolynomial:
        acc = XPolynomial()
        for c in reversed(self.coefficients):
            acc = acc * inner + XPolynomial([c])
        return acc

    def evaluate(self, x: RationalInterval, pi: RationalInterval) -> RationalInterval:
        acc = RationalInterval(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c.evaluate(pi)
        return acc

    def __repr__(self) -> str:
        return f"XPolynomial({format_xpoly(self)!r})"

    def __str__(self) -> str:
        return format_xpoly(self)


@dataclass(frozen=True)
class MTPTerm:
    coeff: XPolynomial
    sin_pow: int = 0
    cos_pow: int = 0

    def __post_init__(self):
        if self.coeff.is_zero():
            raise ValueError("MTP term coefficient must be nonzero")
        if self.sin_pow < 0 or self.cos_pow < 0:
            raise ValueError("trig powers must be non-negative")

    @property
    def key(self) -> tuple[int, int]:
        return (self.sin_pow, self.cos_pow)


class MTPExpression:
    """Sum of MTP terms, at most one per (sin_pow, cos_pow), kept sorted."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[MTPTerm] = ()):
        merged: dict[tuple[int, int], XPolynomial] = {}
        for t in terms:
            merged[t.key] = merged.get(t.key, XPolynomial()) + t.coeff
        self.terms: tuple[MTPTerm, ...] = tuple(
            MTPTerm(c, k[0], k[1]) for k, c in sorted(merged.items()) if not c.is_zero()
        )

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[int, int], XPolynomial]) -> MTPExpression:
        return cls(MTPTerm(c, a, b) for (a, b), c in mapping.items() if not c.is_zero())

    @classmethod
    def polynomial(cls, p) -> MTPExpression:
        p = p if isinstance(p, XPolynomial) else XPolynomial([p])
        return cls([MTPTerm(p)] if not p.is_zero() else [])

    @classmethod
    def x(cls) -> MTPExpression:
        return cls.polynomial(XPolynomial.x())

    @classmethod
    def sin(cls) -> MTPExpression:
        return cls([MTPTerm(XPolynomial([1]), 1, 0)])

    @classmethod
    def cos(cls) -> MTPExpression:
        return cls([MTPTerm(XPolynomial([1]), 0, 1)])

    @classmethod
    def pi(cls) -> MTPExpression:
        return cls.polynomial(XPolynomial([PiPolynomial.pi()]))

    @staticmethod
    def _coerce(other) -> MTPExpression:
        if isinstance(other, MTPExpression):
            return other
        return MTPExpression.polynomial(other)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, sin_pow: int, cos_pow: int) -> XPolynomial:
        for t in self.terms:
            if t.key == (sin_pow, cos_pow):
                return t.coeff
        return XPolynomial()

    def keys(self) -> list[tuple[int, int]]:
        return [t.key for t in self.terms]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MTPExpression):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __neg__(self) -> MTPExpression:
        return MTPExpression(MTPTerm(-t.coeff, t.sin_pow, t.cos_pow) for t in self.terms)

    def __add__(self, other) -> MTPExpression:
        other = self._coerce(other)
        return MTPExpression(self.terms + other.terms)

    __radd__ = __add__

    def __sub__(self, other) -> MTPExpression:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MTPExpression:
        return self._coerce(other) - self

    def __mul__(self, other) -> MTPExpression:
        if not isinstance(other, MTPExpression):
            if isinstance(other, XPolynomial):
                other = MTPExpression.polynomial(other)
            else:
                c = other if isinstance(other, PiPolynomial) else PiPolynomial([as_fraction(other)])
                return MTPExpression(
                    MTPTerm(t.coeff * c, t.sin_pow, t.cos_pow) for t in self.terms if not c.is_zero()
                )
        out = []
        for s in self.terms:
            for t in other.terms:
                out.append(MTPTerm(s.coeff * t.coeff, s.sin_pow + t.sin_pow, s.cos_pow + t.cos_pow))
        return MTPExpression(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MTPExpression:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural exponents are supported")
        result = MTPExpression.polynomial(XPolynomial([1]))
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"MTPExpression({format_expr(self)!r})"

    def __str__(self) -> str:
        return format_expr(self)


# --- normalisation ----------------------------------------------------------


def normalize(e: MTPExpression, reduce_sin_powers: bool = False) -> MTPExpression:
    """Canonical form: like terms merged, zero terms dropped, sorted.

    With ``reduce_sin_powers`` every sin^2 is rewritten as 1 - cos^2 so that
    sin appears at most to the first power (used to compare expressions that
    differ only by the Pythagorean identity).
    """
    e = MTPExpression(e.terms)
    if not reduce_sin_powers:
        return e
    one_minus_cos2 = MTPExpression.polynomial(XPolynomial([1])) - MTPExpression.cos() ** 2
    out = MTPExpression()
    for t in e.terms:
        half, rest = divmod(t.sin_pow, 2)
        piece = MTPExpression([MTPTerm(t.coeff, rest, t.cos_pow)])
        out = out + piece * (one_minus_cos2**half)
    return out


# --- evaluation -------------------------------------------------------------


def eval_enclosure(e: MTPExpression, x: RationalInterval, bits: int = 60) -> RationalInterval:
    """Interval containing e(t) for every t in x (x must lie in [0, 2])."""
    from .taylor import cos_interval, sin_interval

    if not isinstance(x, RationalInterval):
        x = RationalInterval(x)
    if x.lo < 0 or x.hi > 2:
        raise ValueError(f"evaluation interval {x!r} is outside [0, 2]")
    pi = pi_enclosure(bits + 4)
    s = sin_interval(x, bits + 4)
    c = cos_interval(x, bits + 4)
    total = RationalInterval(0)
    for t in e.terms:
        v = t.coeff.evaluate(x, pi)
        if t.sin_pow:
            v = v * s**t.sin_pow
        if t.cos_pow:
            v = v * c**t.cos_pow
        total = total + v
    return total.round_out(bits + 8)


# --- reflection -------------------------------------------------------------

_HALF_PI_MINUS_X = XPolynomial([PiPolynomial([0, Fraction(1, 2)]), PiPolynomial([-1])])


def reflect_half_pi(e: MTPExpression) -> MTPExpression:
    """g with g(x) = e(pi/2 - x): sin and cos swap, coefficients are recomposed."""
    return MTPExpression(
        MTPTerm(t.coeff.compose(_HALF_PI_MINUS_X), t.cos_pow, t.sin_pow) for t in e.terms
    )


def shift_binomial(p: XPolynomial, c: PiPolynomial) -> XPolynomial:
    """p(c - x) by explicit binomial expansion (independent of ``compose``)."""
    out: list[PiPolynomial] = [PiPolynomial()] * max(1, len(p.coefficients))
    for i, a in enumerate(p.coefficients):
        for k in range(i + 1):
            term = a * comb(i, k) * (c ** (i - k))
            if k % 2:
                term = -term
            out[k] = out[k] + term
    return XPolynomial(out)


# --- printing ---------------------------------------------------------------


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomials(p: XPolynomial):
    for i in range(len(p.coefficients) - 1, -1, -1):
        c = p.coefficients[i]
        for j in range(len(c.coefficients) - 1, -1, -1):
            q = c.coefficients[j]
            if q != 0:
                yield q, j, i


def _format_monomial(q: Fraction, pi_pow: int, x_pow: int) -> tuple[str, str]:
    factors = []
    mag = abs(q)
    if pi_pow:
        factors.append("pi" if pi_pow == 1 else f"pi^{pi_pow}")
    if x_pow:
        factors.append("x" if x_pow == 1 else f"x^{x_pow}")
    if mag != 1 or not factors:
        factors.insert(0, _format_rational(mag))
    return ("-" if q < 0 else "+"), "*".join(factors)


def _join(parts: list[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def format_xpoly(p: XPolynomial) -> str:
    return _join([_format_monomial(*m) for m in _monomials(p)])


def _trig_suffix(sin_pow: int, cos_pow: int) -> str:
    out = []
    if sin_pow:
        out.append("sin(x)" if sin_pow == 1 else f"sin(x)^{sin_pow}")
    if cos_pow:
        out.append("cos(x)" if cos_pow == 1 else f"cos(x)^{cos_pow}")
    return "*".join(out)


def format_expr(e: MTPExpression) -> str:
    """Canonical text of ``e`` in the input grammar (parse(format_expr(e)) == e)."""
    parts: list[tuple[str, str]] = []
    for t in e.terms:
        trig = _trig_suffix(t.sin_pow, t.cos_pow)
        monos = [_format_monomial(*m) for m in _monomials(t.coeff)]
        if not trig:
            parts.extend(monos)
        elif len(monos) == 1:
            sign, body = monos[0]
            body = trig if body == "1" else f"{body}*{trig}"
            parts.append((sign, body))
        else:
            parts.append(("+", f"({_join(monos)})*{trig}"))
    return _join(parts)


# --- parsing ----------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<num>\d+)|(?P<name>[A-Za-z_]\w*|π)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            ch = text[pos]
            if ch == ".":
                raise ParseError("decimal literals are not allowed; write a fraction", line, col)
            raise ParseError(f"unexpected character {ch!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind != "ws":
                tokens.append(_Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.line, tok.column)
        return tok

    def parse(self) -> MTPExpression:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.column)
        return e

    def expr(self) -> MTPExpression:
        sign = 1
        if self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        e = self.term()
        if sign < 0:
            e = -e
        while self.peek().text in ("+", "-"):
            op = self.take().text
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> MTPExpression:
        e = self.factor()
        while self.peek().text == "*":
            self.take()
            e = e * self.factor()
        tok = self.peek()
        if tok.text == "/":
            raise ParseError("division is only allowed inside a rational literal", tok.line, tok.column)
        return e

    def factor(self) -> MTPExpression:
        base = self.base()
        if self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "num":
                raise ParseError("exponent must be a non-negative integer", tok.line, tok.column)
            nxt = self.peek()
            if nxt.text == "/":
                raise ParseError("fractional exponents are not allowed", nxt.line, nxt.column)
            return base ** int(tok.text)
        return base

    def base(self) -> MTPExpression:
        tok = self.take()
        if tok.kind == "num":
            value = Fraction(int(tok.text))
            if self.peek().text == "/":
                self.take()
                den = self.take()
                if den.kind != "num":
                    raise ParseError("denominator must be a positive integer literal", den.line, den.column)
                if int(den.text) == 0:
                    raise ParseError("zero denominator", den.line, den.column)
                value /= int(den.text)
            return MTPExpression.polynomial(XPolynomial([value]))
        if tok.kind == "name":
            if tok.text in ("pi", "π"):
                return MTPExpression.pi()
            if tok.text == "x":
                return MTPExpression.x()
            if tok.text in ("sin", "cos"):
                self.expect("(")
                arg = self.take()
                if arg.text != "x":
                    raise ParseError(
                        "only the bare variable x is allowed as a function argument", arg.line, arg.column
                    )
                self.expect(")")
                return MTPExpression.sin() if tok.text == "sin" else MTPExpression.cos()
            raise ParseError(f"unknown identifier {tok.text!r}", tok.line, tok.column)
        if tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = tok.text or "end of input"
        raise ParseError(f"unexpected {found!r}", tok.line, tok.column)


def parse(text: str) -> MTPExpression:
    """Parse the MTP input language (x, pi, rationals, + - * ^, sin(x), cos(x))."""
    return _Parser(text).parse()
