"""Exception types shared across the package."""

__all__ = ["FingeoError", "BudgetExceededError", "VerificationError"]


class FingeoError(Exception):
    """Base class for all package-specific errors."""


class BudgetExceededError(FingeoError):
    """An enumeration or search would exceed the configured work budget."""


class VerificationError(FingeoError):
    """A constructed map or claimed identity failed an exhaustive check."""
