"""Exception types shared by the evaluators and the CLI."""

from __future__ import annotations


class InputError(RuntimeError):
    """Malformed or invalid input; the CLI maps it to exit code 1."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field


class DomainError(InputError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(InputError):
    """A checkable precondition of an operation does not hold."""


class TrivialRegimeError(RuntimeError):
    """Raised when E|psi(Y)|^p is infinite and the inequality holds trivially."""


__all__ = ["DomainError", "InputError", "PreconditionError", "TrivialRegimeError"]
