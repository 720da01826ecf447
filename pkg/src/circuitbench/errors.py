"""Shared exception types."""


class ParseError(ValueError):
    """Malformed circuit, system, or table text.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BudgetError(RuntimeError):
    """A configured resource budget was exceeded.

    Raised instead of silently truncating or returning a partial (wrong)
    answer.  `reached` records how far the computation got.
    """

    def __init__(self, message, reached=None):
        super().__init__(message)
        self.reached = reached


class EmbeddingError(RuntimeError):
    """A universal-template embedding failed its identity verification.

    This always indicates a bug in the embedding construction and is never
    swallowed.
    """
