"""Exception types shared across the package."""


class DynatomicError(Exception):
    """Base class for all library errors."""


class InexactDivisionError(DynatomicError):
    """A division that must be exact left a remainder.

    Every division performed by this library is exact by construction, so
    this always signals an upstream bug, not bad user input.
    """


class ArithmeticInconsistencyError(DynatomicError):
    """Two independently computed quantities disagree.

    Raised when internal cross-checks fail (CLI exit code 3).
    """


class WorkBudgetError(DynatomicError):
    """A computation was aborted because it exceeded the configured budget.

    Distinct from arithmetic failure (CLI exit code 2).
    """


class InsufficientDataError(DynatomicError):
    """A classification rule needs a table or valuation that is unavailable."""
