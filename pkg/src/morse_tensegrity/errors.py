"""Exception hierarchy.

Validation problems (bad documents, malformed graphs) derive from
``ValueError``; numerical failures derive from :class:`NumericError`.
The CLI maps the two families onto distinct exit codes.
"""


class TensegrityError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TensegrityError, ValueError):
    """An input object or document violates an invariant."""


class ParseError(ValidationError):
    """Text could not be decoded as a document."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class NumericError(TensegrityError, ArithmeticError):
    """A numerical precondition failed (degenerate data, no solution...)."""

    def __init__(self, message, vertex=None):
        self.vertex = vertex
        self.detail = message
        if vertex is not None:
            message = f"vertex {vertex!r}: {message}"
        super().__init__(message)


class NonMorseField(NumericError):
    pass


class ZeroGradientField(NumericError):
    pass


class NoCriticalPoints(NumericError):
    pass


class DegenerateHessian(NumericError):
    pass


class PointAtInfinity(NumericError):
    pass


class IdenticallyZeroField(NumericError):
    pass
