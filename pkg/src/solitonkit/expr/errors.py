class ExpressionError(Exception):
    """Base class for errors raised by the expression language."""


class ParseError(ExpressionError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, position: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", position, text)


class UnknownFunctionError(ParseError):
    def __init__(self, name: str, position: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown function {name!r}", position, text)


class EvaluationError(ExpressionError):
    pass


class DomainError(EvaluationError):
    pass


class UnboundSymbolError(EvaluationError):
    pass


class QuadratureError(EvaluationError):
    pass
