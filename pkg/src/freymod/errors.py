"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: RejectedInput -> 2, InvariantViolation -> 3.
"""


class FreyError(Exception):
    """Base class for every error raised deliberately by the package."""


class RejectedInput(FreyError, ValueError):
    """An argument violates an operation's precondition."""


class DegenerateCurve(RejectedInput):
    """The Frey curve would be singular (a + b = 0)."""


class UndefinedValuation(RejectedInput):
    """Valuation of zero was requested."""


class InvariantViolation(FreyError, ArithmeticError):
    """A computed value contradicts a proven identity or a sign guard."""
