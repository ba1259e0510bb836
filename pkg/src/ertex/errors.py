"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ErtexError(Exception):
    """Base class for all errors raised by this package."""


class NonSummable(ErtexError):
    """A requested coefficient would be an infinite sum."""


class HypothesisViolated(ErtexError):
    """The hypotheses of a delta-function substitution cannot be certified."""


class ParseError(ErtexError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class DuplicateBasisId(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class UnknownBasisId(ErtexError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class BoundExceeded(ErtexError):
    """Some finite search bound was hit before the computation finished."""


class NilpotenceBoundExceeded(BoundExceeded):
    pass


class MaxOrderExceeded(BoundExceeded):
    pass


class PreconditionFailed(ErtexError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotClosed(ErtexError):
    pass


class NotApplicable(ErtexError):
    pass
