"""Exception types shared across modules."""

from __future__ import annotations


class InvalidPair(ValueError):
    """Check and generator polynomials do not form a valid cyclic code."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its candidate budget.

    ``certifiable`` is the largest weight that still fits in the budget
    (``-1`` when nothing fits).
    """

    def __init__(self, message: str, certifiable: int = -1):
        super().__init__(message)
        self.certifiable = certifiable


class IsomorphismUnavailable(ValueError):
    pass


class BasisInvalid(ValueError):
    pass


class NotALogical(ValueError):
    pass


class ScheduleInvalid(RuntimeError):
    pass


class CatalogUnavailable(ValueError):
    pass


class TrivialTwist(UserWarning):
    """The anchor overlaps its source logical an even number of times."""
