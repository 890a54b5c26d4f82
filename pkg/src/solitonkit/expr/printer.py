"""Render expressions back into parseable text."""

from __future__ import annotations

from solitonkit.expr.nodes import (
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


def _number(value: float) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        text = str(int(value))
    else:
        text = repr(value)
    return f"({text})" if value < 0 or text.startswith("-") else text


def _atomic(e: Expression) -> bool:
    if isinstance(e, Const):
        return not _number(e.value).startswith("(")
    return isinstance(e, (Symbol, Call, Antiderivative))


def _wrap(e: Expression, bare: tuple[type, ...]) -> str:
    text = to_text(e)
    if _atomic(e) or isinstance(e, bare):
        return text
    return f"({text})"


def to_text(e: Expression) -> str:
    if isinstance(e, Const):
        return _number(e.value)
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, Call):
        return f"{e.function}({to_text(e.arg)})"
    if isinstance(e, Antiderivative):
        return f"integral({to_text(e.integrand)}, {e.variable}, {e.base!r})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, (Neg, Pow))
    if isinstance(e, Pow):
        return f"{_wrap(e.base, ())}^{e.exponent}"
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        return to_text(e.left) + op + _wrap(e.right, (Mul, Div, Neg, Pow))
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return _wrap(e.left, (Mul, Div, Neg, Pow)) + op + _wrap(e.right, (Neg, Pow))
    raise TypeError(f"not an expression node: {e!r}")
