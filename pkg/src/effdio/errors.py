"""Exception types shared across the package."""


class EffdioError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class DomainError(EffdioError, ValueError):
    pass


class FactorizationExhausted(EffdioError):
    """A composite cofactor survived the factoring budget."""

    exit_code = 3

    def __init__(self, cofactor, budget):
        super().__init__(f"could not split {cofactor} within {budget} iterations")
        self.cofactor = cofactor
        self.budget = budget


class SingularCurve(DomainError):
    pass


class NotMinimalAtP(DomainError):
    def __init__(self, p):
        super().__init__(f"model is not minimal at {p}")
        self.p = p


class NonIntegralModel(DomainError):
    pass


class PrecisionLoss(EffdioError):
    exit_code = 3


class DegenerateLambda(DomainError):
    pass


class NotASolution(DomainError):
    pass


class ZeroA(DomainError):
    pass


class SingularForm(DomainError):
    pass


class SearchBudgetExceeded(EffdioError):
    """Raised when an enumeration does not fit in its budget.

    ``partial`` holds a sound certificate for the part that was searched.
    """

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
