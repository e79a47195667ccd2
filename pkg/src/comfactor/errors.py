"""Exception hierarchy shared by all modules."""


class ComfactorError(Exception):
    """Base class for every domain error raised by the package."""


class InvalidFactor(ComfactorError, ValueError):
    pass


class InvalidGraph(ComfactorError, ValueError):
    pass


class InvalidAssignment(ComfactorError, ValueError):
    pass


class IncompleteAssignment(ComfactorError, KeyError):
    pass


class NonNumericPotential(ComfactorError, TypeError):
    """A symbolic potential token was used where a number is required."""


class StateSpaceTooLarge(ComfactorError):
    pass


class SubsetTooSmall(ComfactorError, ValueError):
    pass


class MixedRanges(ComfactorError, ValueError):
    pass


class BudgetExceeded(ComfactorError):
    pass


class DeadlineExceeded(ComfactorError):
    """Raised by the cooperative timeout polls inside the detectors."""


class NotCommutative(ComfactorError, ValueError):
    pass


class WellDefinednessViolation(ComfactorError):
    pass


class SchemaError(ComfactorError, ValueError):
    pass
