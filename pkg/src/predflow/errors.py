"""Exception hierarchy shared by all predflow modules."""

from __future__ import annotations


class InputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ParseError(InputError):
    """Raised on malformed text input. Always carries a 1-based line number."""

    def __init__(self, message: str, lineno: int):
        self.lineno = lineno
        self.reason = message
        super().__init__(f"line {lineno}: {message}")


class BindingError(ParseError):
    """Raised when a flow or capacity file does not match its network."""


class RefusalError(InputError):
    """Raised when an exhaustive routine is asked to handle too large an input."""


class UnsupportedError(InputError):
    """Raised when an operation does not support the given distribution kind."""


class InvariantViolation(AssertionError):
    """Raised when an internal invariant that should be impossible to break fails."""
