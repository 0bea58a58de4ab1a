"""Exception types shared across the package."""


class FtaError(Exception):
    """Base class for every error raised by this package."""


class TermSyntaxError(FtaError):
    """Malformed term text; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownSymbolError(TermSyntaxError):
    """A token is neither a variable nor a symbol of the signature."""


class ArityMismatchError(TermSyntaxError):
    """A symbol was applied to the wrong number of arguments."""


class AutomatonSyntaxError(FtaError):
    """Malformed automaton file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(FtaError):
    """An automaton is incomplete, nondeterministic or ill-formed.

    ``defects`` lists one human-readable entry per problem.
    """

    def __init__(self, defects):
        self.defects = list(defects)
        super().__init__("; ".join(self.defects))


class InvalidPositionError(FtaError):
    """A position is malformed or does not belong to the term."""


class UnboundVariableError(FtaError):
    """A run needs a value for a variable the assignment does not bind."""


class EnumerationBudgetExceeded(FtaError):
    """An exhaustive search would exceed the configured cap.

    Raised up front, before any enumeration work is done.
    """

    def __init__(self, required: int, cap: int):
        super().__init__(
            f"search needs {required} candidate evaluations, cap is {cap}"
        )
        self.required = required
        self.cap = cap


class PremiseViolatedError(FtaError):
    """The preconditions of a deduction rule do not hold."""


class NotEssentialError(FtaError):
    """A position required to be essential is fictive."""


class NotIndependentError(FtaError):
    """Two position sets required to be independent are not."""
