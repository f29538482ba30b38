"""Recursive-descent parser for differential polynomials and field constants.

Grammar (``'^'`` binds tighter than unary minus, which binds tighter than
``*`` and ``/``, which bind tighter than binary ``+``/``-``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := base ('^' uint)?
    base   := '(' expr ')' | 'x' | deriv | uint | 'i' | name
    deriv  := 'y' "'"* | 'y' '^' '(' uint ')'

Juxtaposition (``2x``) is rejected.  The divisor of ``/`` must be a nonzero
constant.  ``i`` is only legal over the Gaussian field, and names must be
declared parameters (or, for :func:`parse_poly`, ring variables).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .arith import GaussianField, ParamField
from .errors import (
    ExponentOverflowError,
    ImaginaryUnitError,
    ParseError,
    UndeclaredParameterError,
)

MAX_EXPONENT = 10_000

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_~]*)|(?P<op>[-+*/^()',]))")


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            pos = n
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", (bad, bad + 1), text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    tokens.append(Token("end", "", n, n))
    return tokens


class _Parser:
    def __init__(self, text, builder):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0
        self.b = builder

    def peek(self, offset=0):
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        return cls(msg, (tok.start, max(tok.end, tok.start + 1)), self.text)

    def expect(self, text):
        t = self.peek()
        if t.kind != "op" or t.text != text:
            raise self.error(f"expected {text!r}")
        return self.next()

    def parse(self):
        if self.peek().kind == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.next()
                start = self.peek()
                rhs = self.unary()
                if t.text == "*":
                    value = value * rhs
                else:
                    value = self.b.divide(value, rhs, lambda m: self.error(m, start))
            elif t.kind in ("num", "name") or (t.kind == "op" and t.text == "("):
                raise self.error("implicit multiplication is not allowed; use '*'")
            else:
                return value

    def unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self):
        value = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            t = self.peek()
            if t.kind != "num":
                raise self.error("exponent must be a nonnegative integer")
            self.next()
            e = int(t.text)
            if e > MAX_EXPONENT:
                raise self.error(f"exponent {e} exceeds {MAX_EXPONENT}", t, ExponentOverflowError)
            value = value ** e
        return value

    def base(self):
        t = self.peek()
        if t.kind == "op" and t.text == "(":
            self.next()
            value = self.expr()
            self.expect(")")
            return value
        if t.kind == "num":
            self.next()
            return self.b.number(int(t.text))
        if t.kind == "name":
            self.next()
            if t.text == "y":
                return self.deriv(t)
            if t.text == "x":
                return self.b.x(lambda m: self.error(m, t))
            if t.text == "i":
                return self.b.imag(lambda m: self.error(m, t, ImaginaryUnitError))
            return self.b.name(t.text, lambda m: self.error(m, t, UndeclaredParameterError))
        raise self.error("expected a number, variable or '('")

    def deriv(self, ytok):
        order = 0
        if (self.peek().kind == "op" and self.peek().text == "^"
                and self.peek(1).kind == "op" and self.peek(1).text == "("):
            self.next()
            self.next()
            t = self.peek()
            if t.kind != "num":
                raise self.error("derivative order must be a nonnegative integer")
            self.next()
            order = int(t.text)
            if order > MAX_EXPONENT:
                raise self.error("derivative order too large", t, ExponentOverflowError)
            self.expect(")")
        else:
            while self.peek().kind == "op" and self.peek().text == "'":
                self.next()
                order += 1
        return self.b.deriv(order, lambda m: self.error(m, ytok))


class _ConstantBuilder:
    """Builds field elements."""

    def __init__(self, field, extra=None):
        self.field = field
        self.extra = extra or {}

    def number(self, n):
        return self.field.convert(n)

    def imag(self, err):
        if not isinstance(self.field, GaussianField):
            raise err("'i' is only allowed over the gaussian field")
        return GaussianField.i

    def name(self, n, err):
        if n in self.extra:
            return self.extra[n]
        if isinstance(self.field, ParamField) and n in self.field.params:
            return self.field.gen(n)
        raise err(f"undeclared parameter {n!r}")

    def x(self, err):
        raise err("'x' is not allowed in a constant")

    def deriv(self, j, err):
        raise err("'y' is not allowed in a constant")

    def divide(self, a, b, err):
        if self.field.is_zero(b):
            raise err("division by zero")
        return a * self.field.inv(b)


class _PolyBuilder(_ConstantBuilder):
    """Builds MultiPoly values over a ring; ring variables shadow parameters."""

    def __init__(self, ring):
        super().__init__(ring.field)
        self.ring = ring

    def number(self, n):
        return self.ring.constant(n)

    def imag(self, err):
        return self.ring.constant(super().imag(err))

    def name(self, n, err):
        if n in self.ring.names:
            return self.ring.gen(n)
        return self.ring.constant(super().name(n, err))

    def divide(self, a, b, err):
        if not b.is_constant() or b.is_zero():
            raise err("divisor must be a nonzero constant")
        return a * self.field.inv(b.constant_coeff())


class _DiffPolyBuilder(_ConstantBuilder):
    def number(self, n):
        from .diffpoly import DiffPoly

        return DiffPoly.constant(self.field, n)

    def imag(self, err):
        from .diffpoly import DiffPoly

        return DiffPoly.constant(self.field, super().imag(err))

    def name(self, n, err):
        from .diffpoly import DiffPoly

        return DiffPoly.constant(self.field, super().name(n, err))

    def x(self, err):
        from .diffpoly import DiffPoly

        return DiffPoly.x(self.field)

    def deriv(self, j, err):
        from .diffpoly import DiffPoly

        return DiffPoly.y(self.field, j)

    def divide(self, a, b, err):
        c = b.constant_value()
        if c is None or self.field.is_zero(c):
            raise err("divisor must be a nonzero constant")
        return a * self.field.inv(c)


def parse_diffpoly(text: str, field):
    """Parse a differential polynomial in x, y, y', ... over ``field``."""
    return _Parser(text, _DiffPolyBuilder(field)).parse()


def parse_constant(text: str, field):
    """Parse a field constant (rational, Gaussian or parameter expression)."""
    return _Parser(text, _ConstantBuilder(field)).parse()


def parse_poly(text: str, ring):
    """Parse a polynomial over ``ring``; names resolve to ring variables first,
    then to field parameters."""
    return _Parser(text, _PolyBuilder(ring)).parse()


def render_diffpoly(F) -> str:
    return F.render()
