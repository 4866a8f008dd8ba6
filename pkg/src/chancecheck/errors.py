"""Exception types shared across the package."""


class ChanceCheckError(Exception):
    """Base class for all errors raised by chancecheck."""


class DomainError(ChanceCheckError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConflictError(ChanceCheckError):
    """A record with the same identifier already exists."""


class NotFoundError(ChanceCheckError, KeyError):
    """A referenced identifier or agent is unknown."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(ChanceCheckError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(ChanceCheckError):
    """Exact enumeration would exceed the configured budget."""
