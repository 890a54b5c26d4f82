"""Scalar expression language: parsing, differentiation, simplification, evaluation."""

from solitonkit.expr.chart import Chart, lorentz_chart
from solitonkit.expr.differentiate import derivative, differentiate
from solitonkit.expr.errors import (
    DomainError,
    EvaluationError,
    ExpressionError,
    ParseError,
    QuadratureError,
    UnboundSymbolError,
    UnknownFunctionError,
    UnknownIdentifierError,
)
from solitonkit.expr.evaluate import compile_expression, evaluate, evaluate_env
from solitonkit.expr.nodes import (
    FUNCTIONS,
    ONE,
    ZERO,
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
    antiderivative,
    as_expression,
    atan,
    cos,
    cosh,
    exp,
    ln,
    sin,
    sinh,
    sqrt,
    sym,
    total,
)
from solitonkit.expr.parser import parse
from solitonkit.expr.printer import to_text
from solitonkit.expr.quadrature import adaptive_simpson
from solitonkit.expr.simplify import simplify

__all__ = [
    "FUNCTIONS",
    "ONE",
    "ZERO",
    "Add",
    "Antiderivative",
    "Call",
    "Chart",
    "Const",
    "Div",
    "DomainError",
    "EvaluationError",
    "Expression",
    "ExpressionError",
    "Mul",
    "Neg",
    "ParseError",
    "Pow",
    "QuadratureError",
    "Sub",
    "Symbol",
    "UnboundSymbolError",
    "UnknownFunctionError",
    "UnknownIdentifierError",
    "adaptive_simpson",
    "antiderivative",
    "as_expression",
    "atan",
    "compile_expression",
    "cos",
    "cosh",
    "derivative",
    "differentiate",
    "evaluate",
    "evaluate_env",
    "exp",
    "ln",
    "lorentz_chart",
    "parse",
    "simplify",
    "sin",
    "sinh",
    "sqrt",
    "sym",
    "to_text",
    "total",
]
