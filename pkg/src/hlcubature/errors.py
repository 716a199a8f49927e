"""Exception hierarchy shared by all modules."""


class HLCubatureError(Exception):
    """Base class for library errors."""


class ParameterError(HLCubatureError, ValueError):
    """Invalid dimensions, levels, deformation parameters or weights."""


class SingularConfigurationError(HLCubatureError, ArithmeticError):
    """A C-factor denominator vanishes at the requested angles."""


class ConvergenceError(HLCubatureError, RuntimeError):
    """Newton iteration failed to reach the requested tolerance."""


class ResourceError(HLCubatureError, MemoryError):
    """Group symmetrization too large to evaluate."""


class AccuracyError(HLCubatureError, RuntimeError):
    """Reference integration did not reach its tolerance within budget.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
