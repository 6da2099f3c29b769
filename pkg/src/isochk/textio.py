"""Parsing and canonical formatting of polynomial expressions.

Grammar (ASCII only, no implicit multiplication, division only inside
rational literals):

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | 'i' | 'x' | 'y' | '(' expr ')'
    rational := uint ('/' uint)?

``format_poly`` emits a canonical graded-lexicographic form (higher total
degree first, x before y) that parses back to an equal BiPoly.
"""

from __future__ import annotations

from fractions import Fraction

from .bipoly import BiPoly
from .qi import QI


class ParseError(ValueError):
    """Syntax or lexical error with a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_TOKEN_CHARS = {"+", "-", "*", "^", "(", ")"}


def _tokenize(text: str):
    tokens = []
    k = 0
    n = len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, k))
            k += 1
            continue
        if ch in ("x", "y", "i"):
            tokens.append(("name", ch, k))
            k += 1
            continue
        if ch.isdigit():
            start = k
            while k < n and text[k].isdigit():
                k += 1
            if k < n and text[k] == ".":
                raise ParseError("exact rationals only (no decimal literals)", k)
            num = int(text[start:k])
            den = 1
            if k < n and text[k] == "/":
                k += 1
                dstart = k
                while k < n and text[k].isdigit():
                    k += 1
                if dstart == k:
                    raise ParseError("expected denominator digits", k)
                if k < n and text[k] == ".":
                    raise ParseError("exact rationals only (no decimal literals)", k)
                den = int(text[dstart:k])
                if den == 0:
                    raise ParseError("zero denominator", dstart)
            tokens.append(("number", Fraction(num, den), start))
            continue
        if ch == ".":
            raise ParseError("exact rationals only (no decimal literals)", k)
        raise ParseError(f"unexpected character {ch!r}", k)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}", tok[2])
        return self.advance()

    def parse_expr(self) -> BiPoly:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.advance()[0] == "-" else 1
        out = self.parse_term()
        if sign < 0:
            out = -out
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            term = self.parse_term()
            out = out + term if op == "+" else out - term
        return out

    def parse_term(self) -> BiPoly:
        out = self.parse_factor()
        while self.peek()[0] == "*":
            self.advance()
            out = out * self.parse_factor()
        return out

    def parse_factor(self) -> BiPoly:
        base = self.parse_base()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.peek()
            if tok[0] != "number" or tok[1].denominator != 1:
                raise ParseError("expected a nonnegative integer exponent", tok[2])
            self.advance()
            base = base ** int(tok[1])
        return base

    def parse_base(self) -> BiPoly:
        kind, value, pos = self.peek()
        if kind == "number":
            self.advance()
            return BiPoly.constant(QI(value))
        if kind == "name":
            self.advance()
            if value == "i":
                return BiPoly.constant(QI(0, 1))
            return BiPoly.variable(value)
        if kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError("expected a rational, 'i', 'x', 'y' or '('", pos)


def parse_poly(text: str) -> BiPoly:
    """Parse an exact polynomial expression in x and y."""
    parser = _Parser(text)
    out = parser.parse_expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return out


def _fraction_str(f: Fraction) -> str:
    return str(f)


def _coeff_pieces(c: QI):
    """Return (sign, body) with sign in {+1,-1}; mixed coefficients keep +1."""
    if c.is_real():
        sign = -1 if c.re < 0 else 1
        return sign, _fraction_str(abs(c.re))
    if not c.re:
        sign = -1 if c.im < 0 else 1
        mag = abs(c.im)
        return sign, "i" if mag == 1 else f"{_fraction_str(mag)}*i"
    im = c.im
    join = "+" if im > 0 else "-"
    mag = abs(im)
    im_body = "i" if mag == 1 else f"{_fraction_str(mag)}*i"
    return 1, f"({_fraction_str(c.re)}{join}{im_body})"


def _monomial_str(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("x")
    elif i > 1:
        parts.append(f"x^{i}")
    if j == 1:
        parts.append("y")
    elif j > 1:
        parts.append(f"y^{j}")
    return "*".join(parts)


def format_poly(p: BiPoly) -> str:
    """Canonical text form; round-trips through parse_poly."""
    if p.is_zero():
        return "0"
    keys = sorted(p.terms, key=lambda e: (e[0] + e[1], e[0]), reverse=True)
    pieces = []
    for e in keys:
        sign, body = _coeff_pieces(p.terms[e])
        mono = _monomial_str(*e)
        if mono:
            if body == "1":
                text = mono
            else:
                text = f"{body}*{mono}"
        else:
            text = body
        pieces.append((sign, text))
    first_sign, first_text = pieces[0]
    out = ("-" if first_sign < 0 else "") + first_text
    for sign, text in pieces[1:]:
        out += (" - " if sign < 0 else " + ") + text
    return out
