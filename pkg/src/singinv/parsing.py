"""Recursive-descent parser for polynomial text.

Grammar::

    expr     := ["+"|"-"] term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" nat)?
    base     := rational | ident | "(" expr ")"
    rational := int ("/" nat)?

Whitespace is ignored.  There is no implicit multiplication: ``xy`` is a
single identifier.
"""

from __future__ import annotations

import re
from typing import Sequence

from gmpy2 import mpq

from .errors import ParseError
from .poly import Polynomial

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = pos
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = {"end": "end of input", "num": "a natural number"}.get(kind, repr(kind))
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", self.text, tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            base = base ** int(tok[1])
        return base

    def base(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(value)
            if self.peek()[0] == "/":
                self.take()
                dtok = self.take("num")
                den = int(dtok[1])
                if den == 0:
                    raise ParseError("zero denominator in rational literal", self.text, dtok[2])
                return Polynomial.constant(mpq(num, den), self.nvars)
            return Polynomial.constant(num, self.nvars)
        if kind == "ident":
            self.take()
            if value not in self.names:
                raise ParseError(f"unknown variable {value!r}", self.text, pos)
            return Polynomial.variable(self.names[value], self.nvars)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected a number, variable or '(', found {found}", self.text, pos)


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a Polynomial in the variables ``names`` (in order)."""
    names = list(names)
    if not names:
        raise ValueError("at least one variable name is required")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable names in {names}")
    parser = _Parser(text, names)
    if parser.peek()[0] == "end":
        raise ParseError("empty input", text, 0)
    result = parser.expr()
    parser.take("end")
    return result
