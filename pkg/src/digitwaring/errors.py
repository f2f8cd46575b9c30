"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class DigitWaringError(Exception):
    """Base class for library errors."""


class BudgetExceeded(DigitWaringError):
    """A computation would exceed its configured size budget."""


class HypothesisViolated(DigitWaringError):
    """An input fails a stated hypothesis.

    ``clause`` names the failing condition so callers (and tests) can tell
    which requirement was broken.
    """

    def __init__(self, clause, message=None):
        self.clause = clause
        super().__init__(message or clause)


class NotFound(DigitWaringError):
    """A bounded search ended without a result."""
