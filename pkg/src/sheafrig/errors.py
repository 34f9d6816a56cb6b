class SheafrigError(Exception):
    """Base class for library errors."""


class PreconditionError(SheafrigError, ValueError):
    """Input violates an operation's precondition (CLI exit code 2)."""


class ConsistencyError(SheafrigError, AssertionError):
    """Two computation paths disagree, or a proved guarantee failed to hold.

    Always signals an implementation bug rather than bad input.
    """


class BudgetExceeded(SheafrigError):
    """An exponential search or oracle hit its size or step budget."""
