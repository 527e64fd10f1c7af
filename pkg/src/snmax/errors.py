"""Exception types shared across the package."""

from __future__ import annotations


class SizeError(ValueError):
    """An input size is outside the supported range."""


class BudgetError(SizeError):
    """A computation would exceed its configured memory or work budget."""


class ShapeError(ValueError):
    """Dimensions of two operands do not match."""


class SpecializationError(ArithmeticError):
    """A rational function has a vanishing denominator at the requested point."""


class DomainError(ValueError):
    """An operation was requested outside the regime where it is well defined."""
