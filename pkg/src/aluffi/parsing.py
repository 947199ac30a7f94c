"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := [sign] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)?
    atom   := int ['/' int] | var | '(' expr ')'

Implicit multiplication is rejected, variables must match declared names
exactly, and ``/`` is only allowed between two integer literals (a rational
constant) so that every printed polynomial parses back to itself.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .ring import Polynomial, RingSpec

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        ws = text[pos:m.start(m.lastindex)]
        for i, ch in enumerate(ws):
            if ch == "\n":
                line, line_start = line + 1, pos + i + 1
        start = m.start(m.lastindex)
        col = start - line_start + 1
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), line, col))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), line, col))
        else:
            tokens.append(("op", m.group(3), line, col))
        pos = m.end()
    end_col = len(text) - line_start + 1
    tokens.append(("end", None, line, end_col))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], tok[3], self.text)

    def expect_op(self, op):
        tok = self.advance()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("var", "int") or tok[1] == "(":
                raise self.error("implicit multiplication is not allowed; use '*'", tok)
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return result

    def expr(self):
        tok = self.peek()
        negate = False
        if tok[0] == "op" and tok[1] in "+-":
            self.advance()
            negate = tok[1] == "-"
        result = self.term()
        if negate:
            result = -result
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in ("+", "-"):
                self.advance()
                rhs = self.term()
                result = result + rhs if tok[1] == "+" else result - rhs
            else:
                return result

    def term(self):
        result = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.advance()
                result = result * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                raise self.error("division is only allowed between integer literals", tok)
            else:
                return result

    def factor(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            exp = self.advance()
            if exp[0] != "int":
                raise self.error("exponent must be a nonnegative integer literal", exp)
            return base ** exp[1]
        return base

    def atom(self):
        tok = self.advance()
        kind, value = tok[0], tok[1]
        if kind == "int":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.advance()
                den = self.advance()
                if den[0] != "int":
                    raise self.error("division is only allowed between integer literals", nxt)
                if den[1] == 0:
                    raise self.error("division by zero", den)
                after = self.peek()
                if after[0] == "op" and after[1] == "^":
                    raise self.error("parenthesize a rational literal before '^'", after)
                return self.ring.constant(Fraction(value, den[1]))
            return self.ring.constant(value)
        if kind == "var":
            if value not in self.ring.index:
                raise self.error(f"unknown variable {value!r}", tok)
            return self.ring.gen(value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {value!r}", tok)


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``text`` into a canonical polynomial of ``ring``."""
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    return _Parser(text, ring).parse()


def parse_polynomials(texts, ring: RingSpec) -> list:
    return [parse_polynomial(t, ring) for t in texts]
