"""Exception types shared across the solvers."""


class PowsatError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(PowsatError):
    """An input violates a structural precondition (unknown symbol, bad sort,
    wrong vector length, malformed table)."""


class CapacityError(PowsatError):
    """An enumeration or expansion would exceed its documented cap.

    Distinct from an unsat verdict: the query was not decided at all.
    """


class SourceError(PowsatError):
    """A surface-syntax error carrying a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
