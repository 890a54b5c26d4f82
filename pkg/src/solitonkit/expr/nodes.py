"""Expression tree nodes.

Every node is a frozen dataclass, so trees are immutable, hashable and
compare structurally. Python operators build unsimplified trees; call
:func:`solitonkit.expr.simplify` to tidy them up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

FUNCTIONS = ("exp", "ln", "sin", "cos", "sinh", "cosh", "sqrt", "atan")

Operand = Union["Expression", int, float]


class Expression:
    """Base class for all expression nodes."""

    __slots__ = ()

    def children(self) -> tuple[Expression, ...]:
        return ()

    def walk(self) -> Iterator[Expression]:
        yield self
        for child in self.children():
            yield from child.walk()

    def symbols(self) -> set[str]:
        names = {node.name for node in self.walk() if isinstance(node, Symbol)}
        for node in self.walk():
            if isinstance(node, Antiderivative):
                names.add(node.variable)
        return names

    def has_antiderivative(self) -> bool:
        return any(isinstance(node, Antiderivative) for node in self.walk())

    def __add__(self, other: Operand) -> Expression:
        return Add(self, as_expression(other))

    def __radd__(self, other: Operand) -> Expression:
        return Add(as_expression(other), self)

    def __sub__(self, other: Operand) -> Expression:
        return Sub(self, as_expression(other))

    def __rsub__(self, other: Operand) -> Expression:
        return Sub(as_expression(other), self)

    def __mul__(self, other: Operand) -> Expression:
        return Mul(self, as_expression(other))

    def __rmul__(self, other: Operand) -> Expression:
        return Mul(as_expression(other), self)

    def __truediv__(self, other: Operand) -> Expression:
        return Div(self, as_expression(other))

    def __rtruediv__(self, other: Operand) -> Expression:
        return Div(as_expression(other), self)

    def __pow__(self, exponent: int) -> Expression:
        return Pow(self, exponent)

    def __neg__(self) -> Expression:
        return Neg(self)

    def __str__(self) -> str:
        from solitonkit.expr.printer import to_text

        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const(Expression):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, slots=True)
class Symbol(Expression):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(Expression):
    arg: Expression

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Add(Expression):
    left: Expression
    right: Expression

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Sub(Expression):
    left: Expression
    right: Expression

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Mul(Expression):
    left: Expression
    right: Expression

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Div(Expression):
    left: Expression
    right: Expression

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Pow(Expression):
    base: Expression
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise TypeError(f"exponent must be an int, got {self.exponent!r}")
        if not -(2**63) <= self.exponent < 2**63:
            raise ValueError("exponent does not fit a signed 64-bit integer")

    def children(self):
        return (self.base,)


@dataclass(frozen=True, slots=True)
class Call(Expression):
    function: str
    arg: Expression

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValueError(f"unknown function {self.function!r}")

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Antiderivative(Expression):
    """``integral from base to <variable> of integrand d<variable>``.

    The integrand may depend on other coordinates; they are held fixed at
    the evaluation point.
    """

    integrand: Expression
    variable: str
    base: float

    def __post_init__(self):
        object.__setattr__(self, "base", float(self.base))
        for node in self.integrand.walk():
            if isinstance(node, Antiderivative) and node.variable == self.variable:
                raise ValueError(
                    f"nested antiderivative in {self.variable!r} is not supported"
                )

    def children(self):
        return (self.integrand,)


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expression(value: Operand) -> Expression:
    if isinstance(value, Expression):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Const(value)
    raise TypeError(f"cannot convert {value!r} to an Expression")


def sym(name: str) -> Symbol:
    return Symbol(name)


def call(function: str, arg: Operand) -> Call:
    return Call(function, as_expression(arg))


def exp(arg: Operand) -> Call:
    return call("exp", arg)


def ln(arg: Operand) -> Call:
    return call("ln", arg)


def sin(arg: Operand) -> Call:
    return call("sin", arg)


def cos(arg: Operand) -> Call:
    return call("cos", arg)


def sinh(arg: Operand) -> Call:
    return call("sinh", arg)


def cosh(arg: Operand) -> Call:
    return call("cosh", arg)


def sqrt(arg: Operand) -> Call:
    return call("sqrt", arg)


def atan(arg: Operand) -> Call:
    return call("atan", arg)


def antiderivative(integrand: Operand, variable: str, base: float = 0.0) -> Antiderivative:
    return Antiderivative(as_expression(integrand), variable, base)


def total(terms) -> Expression:
    """Left-folded sum of ``terms``; the empty sum is ``Const(0)``."""
    result = None
    for term in terms:
        term = as_expression(term)
        result = term if result is None else Add(result, term)
    return ZERO if result is None else result
