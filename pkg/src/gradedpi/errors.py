"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: SpecFormatError and PolynomialSyntaxError
to 2, PreconditionError to 3, InvariantViolation to 4.
"""


class GradedPIError(Exception):
    """Base class for all errors raised by this package."""


class SpecFormatError(GradedPIError):
    """Malformed algebra-spec text (carries line/column when known)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}: {message}" if column is None else \
                f"line {line}, col {column}: {message}"
        super().__init__(message)


class PolynomialSyntaxError(GradedPIError):
    """Malformed graded-polynomial text (carries position)."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"at position {pos}: {message}"
        super().__init__(message)


class PreconditionError(GradedPIError):
    """A documented mathematical precondition does not hold for the input."""


class InadmissibleSubstitution(PreconditionError):
    """Substitution misses a variable or assigns the wrong homogeneous degree."""


class InvariantViolation(GradedPIError):
    """An internal cross-check failed; indicates a bug, not bad user input."""
