"""Exception hierarchy.

Everything raised because the caller handed us bad data derives from
``InputError`` (the CLI maps it to exit status 2).  ``VerificationFailed``
signals an internal inconsistency and ``BudgetExhausted`` a search that ran
out of primes.
"""

from __future__ import annotations


class GenusError(Exception):
    """Base class for all library errors."""


class InputError(GenusError, ValueError):
    """Invalid input; the message names the violated precondition."""


class NotSquarefree(InputError):
    pass


class ValueOutOfRange(InputError):
    pass


class NotCoprime(InputError):
    pass


class InvalidPlace(InputError):
    pass


class ZeroArgument(InputError):
    pass


class InvalidDiscriminant(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class RamifiedInGoverning(InputError):
    pass


class OverlapError(InputError):
    pass


class NotFundamental(InputError):
    pass


class InvalidRange(InputError):
    pass


class BudgetExhausted(GenusError):
    def __init__(self, target, budget):
        super().__init__(f"BudgetExhausted: no prime <= {budget} with Frobenius vector {tuple(target)}")
        self.target = tuple(target)
        self.budget = budget


class VerificationFailed(GenusError):
    def __init__(self, message, report=None):
        super().__init__(f"VerificationFailed: {message}")
        self.report = report
