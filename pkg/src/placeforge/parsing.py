"""Expression parsing and printing for rational functions.

Grammar (whitespace insignificant):

    expr     := ["-"] term (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := base ("^" ["-"] integer)?
    base     := integer | variable | "(" expr ")"
    variable := "x" positive-integer, or an identifier declared in context

Rational literals like 3/2 need no special casing: "/" is ordinary
division.  The printer emits this grammar, so print-parse round trips are
exact.
"""

from __future__ import annotations

import re

from .ratfunc import BaseField, Poly, RatFunc


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos)
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", int(number), m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        else:
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def default_names(arity: int, prefix: str = "x"):
    return tuple(f"{prefix}{i}" for i in range(1, arity + 1))


class _Parser:
    def __init__(self, tokens, field: BaseField, arity: int, names):
        self.tokens = tokens
        self.i = 0
        self.field = field
        self.arity = arity
        self.index_of = {name: k for k, name in enumerate(names)}

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != symbol:
            raise ParseError(f"expected {symbol!r}", pos)
        self.advance()

    def parse(self) -> RatFunc:
        out = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {value!r}", pos)
        return out

    def expr(self) -> RatFunc:
        negate = False
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                out = out + rhs if value == "+" else out - rhs
            else:
                return out

    def term(self) -> RatFunc:
        out = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                rhs = self.factor()
                if value == "*":
                    out = out * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero", pos)
                    out = out / rhs
            else:
                return out

    def factor(self) -> RatFunc:
        out = self.base()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            sign = 1
            kind, value, pos = self.peek()
            if kind == "op" and value == "-":
                self.advance()
                sign = -1
            kind, value, pos = self.peek()
            if kind != "num":
                raise ParseError("expected an integer exponent", pos)
            self.advance()
            if value >= 2**62:
                raise ParseError("exponent overflow", pos)
            if sign < 0 and out.is_zero():
                raise ParseError("negative power of zero", pos)
            out = out ** (sign * value)
        return out

    def base(self) -> RatFunc:
        kind, value, pos = self.advance()
        if kind == "num":
            return RatFunc.const(self.field, self.arity, value)
        if kind == "name":
            idx = self.index_of.get(value)
            if idx is None:
                raise ParseError(f"unknown variable {value!r}", pos)
            return RatFunc.variable(self.field, self.arity, idx)
        if kind == "op" and value == "(":
            out = self.expr()
            self.expect_op(")")
            return out
        raise ParseError("expected a number, variable or parenthesis", pos)


def parse_expr(text: str, arity: int, field: BaseField, names=None) -> RatFunc:
    """Parse an expression into a canonical rational function."""
    if names is None:
        names = default_names(arity)
    if len(names) != arity:
        raise ValueError("need one name per variable")
    return _Parser(_tokenize(text), field, arity, names).parse()


def _format_coeff(field: BaseField, c) -> str:
    if field.p:
        return str(int(c))
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(e, names):
    parts = []
    for k, x in enumerate(e):
        if x == 1:
            parts.append(names[k])
        elif x:
            parts.append(f"{names[k]}^{x}")
    return "*".join(parts)


def format_poly(p: Poly, names=None) -> str:
    if names is None:
        names = default_names(p.arity)
    if not p.terms:
        return "0"
    field = p.field
    chunks = []
    for e, c in sorted(p.terms.items(), reverse=True):
        mono = _format_monomial(e, names)
        cs = _format_coeff(field, c)
        negative = cs.startswith("-")
        mag = cs[1:] if negative else cs
        if mono:
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(chunks)


def _is_plain_monomial(p: Poly) -> bool:
    if len(p.terms) != 1:
        return False
    (e, c), = p.terms.items()
    return c == p.field.coerce(1) and sum(1 for x in e if x) <= 1


def format_ratfunc(f: RatFunc, names=None) -> str:
    if names is None:
        names = default_names(f.arity)
    num = format_poly(f.num, names)
    if f.den == Poly.const(f.field, f.arity, 1):
        return num
    den = format_poly(f.den, names)
    if len(f.num.terms) > 1:
        num = f"({num})"
    if not _is_plain_monomial(f.den):
        den = f"({den})"
    return f"{num}/{den}"
