"""Shared exception type for contract violations."""


class DomainError(ValueError):
    """Raised when an argument leaves the documented domain of an operation."""
