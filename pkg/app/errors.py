"""
Exception hierarchy shared by every subpackage.

Each error also derives from the closest builtin so callers that only know
about ValueError / RuntimeError keep working.
"""


class HeisenbergError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HeisenbergError, ValueError):
    pass


class DimensionMismatchError(HeisenbergError, ValueError):
    pass


class InvalidSelectorError(HeisenbergError, ValueError):
    pass


class InvalidInputError(HeisenbergError, ValueError):
    pass


class NonFiniteValueError(HeisenbergError, ArithmeticError):
    pass


class NonFiniteStateError(NonFiniteValueError):
    pass


class StepLimitExceededError(HeisenbergError, RuntimeError):
    pass


class SingularJacobianError(HeisenbergError, ArithmeticError):
    pass


class MaxIterationsExceededError(HeisenbergError, RuntimeError):
    pass


class NotNormalizedError(HeisenbergError, ValueError):
    pass


class MissingControlsError(HeisenbergError, ValueError):
    pass


class NoSolutionFoundError(HeisenbergError, RuntimeError):
    pass


class InvalidStructureConstantsError(HeisenbergError, ValueError):
    pass


class NotUnitSpeedError(HeisenbergError, ValueError):
    pass


class InconsistentInputsError(HeisenbergError, ValueError):
    pass


class DegeneratePlaneError(HeisenbergError, ValueError):
    pass


class NoConjugatePointFoundError(HeisenbergError, RuntimeError):
    pass


class NotContactError(HeisenbergError, ValueError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class ConstructionFailedError(HeisenbergError, RuntimeError):
    pass


class NotInIsotropyAlgebraError(HeisenbergError, ValueError):
    def __init__(self, message: str, linearization=None):
        super().__init__(message)
        self.linearization = linearization


class NotClosedError(HeisenbergError, ValueError):
    def __init__(self, message: str, failures=None):
        super().__init__(message)
        self.failures = failures or []
