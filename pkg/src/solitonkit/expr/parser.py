"""Recursive descent parser for the scalar expression language.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' signed-integer)?
    base   := number | identifier | fn '(' expr ')' | '(' expr ')'
            | 'integral' '(' expr ',' coordinate ',' signed-number ')'

``-u^2`` therefore parses as ``-(u^2)``. The ``integral`` form is the
text spelling of an antiderivative node; it is what the printer emits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from solitonkit.expr.chart import Chart
from solitonkit.expr.errors import ParseError, UnknownFunctionError, UnknownIdentifierError
from solitonkit.expr.nodes import (
    FUNCTIONS,
    Add,
    Antiderivative,
    Call,
    Const,
    Div,
    Expression,
    Mul,
    Neg,
    Pow,
    Sub,
    Symbol,
)

INTEGRAL = "integral"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: frozenset[str], coordinates: frozenset[str]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.names = names
        self.coordinates = coordinates

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.pos, self.text)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Expression:
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expression:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expression:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            right = self.factor()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def factor(self) -> Expression:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.factor())
        base = self.base()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Pow(base, self.signed_integer())
        return base

    def signed_integer(self) -> int:
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        tok = self.tok
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error("exponent must be an integer literal")
        self.advance()
        value = sign * int(tok.text)
        if not -(2**63) <= value < 2**63:
            raise self.error("exponent out of range", tok)
        return value

    def signed_number(self) -> float:
        sign = 1.0
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1.0 if self.advance().text == "-" else 1.0
        if self.tok.kind != "number":
            raise self.error("expected a number")
        return sign * float(self.advance().text)

    def base(self) -> Expression:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.application(tok)
            if tok.text not in self.names:
                raise UnknownIdentifierError(tok.text, tok.pos, self.text)
            return Symbol(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def application(self, name: Token) -> Expression:
        if name.text == INTEGRAL:
            self.expect("(")
            integrand = self.expr()
            self.expect(",")
            var = self.tok
            if var.kind != "ident" or var.text not in self.coordinates:
                raise self.error("integration variable must be a chart coordinate")
            self.advance()
            self.expect(",")
            base = self.signed_number()
            self.expect(")")
            try:
                return Antiderivative(integrand, var.text, base)
            except ValueError as exc:
                raise self.error(str(exc), name) from None
        if name.text not in FUNCTIONS:
            raise UnknownFunctionError(name.text, name.pos, self.text)
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        return Call(name.text, arg)


def parse(text: str, chart: Chart | Iterable[str], parameter_names: Iterable[str] = ()) -> Expression:
    """Parse ``text`` into an expression over ``chart`` coordinates and parameters.

    Raises ParseError (with ``position``), UnknownIdentifierError or
    UnknownFunctionError.
    """
    coords = frozenset(chart.coordinates if isinstance(chart, Chart) else chart)
    params = frozenset(parameter_names)
    clash = coords & params
    if clash:
        raise ValueError(f"parameter names clash with coordinates: {sorted(clash)}")
    return _Parser(text, coords | params, coords).parse()
