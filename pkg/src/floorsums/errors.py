"""Shared exception types."""


class BudgetError(RuntimeError):
    """A configured memory/time budget would be exceeded."""


class CoverageError(ValueError):
    """A sieve table does not cover the range an operation needs."""


class WindowError(ValueError):
    """A parameter lies outside the admissible window of an operation."""
