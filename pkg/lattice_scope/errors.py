"""Exception hierarchy shared by every lattice_scope module."""


class LatticeScopeError(Exception):
    """Base class for all domain errors raised by lattice_scope"""


class InvalidArgumentError(LatticeScopeError, ValueError):
    """An argument violates an operation's precondition"""


class RangeError(LatticeScopeError, ValueError):
    """A value lies outside the range a table or bound can serve"""


class WorkBudgetExceededError(LatticeScopeError):
    """A scan or search would exceed its configured work cap"""

    def __init__(self, message, advisory=''):
        super().__init__(f"{message} ({advisory})" if advisory else message)
        self.advisory = advisory


class CoprimePairNotFoundError(LatticeScopeError):
    """No admissible coprime pair exists for a block pair (i, j).

    Raised when the explicit cover is evaluated below the size at which the
    counting argument guarantees a pair.
    """

    def __init__(self, i, j, message=''):
        super().__init__(message or f"no coprime pair for block ({i}, {j}); n is below the guaranteed regime")
        self.i = i
        self.j = j
