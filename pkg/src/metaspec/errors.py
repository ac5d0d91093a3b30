"""Exception hierarchy.

Every error raised by the library derives from :class:`MetaspecError`. The
three intermediate classes decide the CLI exit code: input validation (2),
mathematical precondition (3) and numerical failure (4).
"""


class MetaspecError(Exception):
    """Base class for all library errors."""


class InputValidationError(MetaspecError, ValueError):
    pass


class PreconditionError(MetaspecError, ValueError):
    pass


class NumericalError(MetaspecError, ArithmeticError):
    pass


# input validation
class ShapeMismatch(InputValidationError):
    pass


class NotAntisymmetric(InputValidationError):
    pass


class NotSymmetric(InputValidationError):
    pass


class NotHermitian(InputValidationError):
    pass


class NotNormal(InputValidationError):
    pass


class NotUnitary(InputValidationError):
    pass


# mathematical preconditions
class ReconstructionFailed(PreconditionError):
    def __init__(self, message, worst_residual=float("inf")):
        super().__init__(message)
        self.worst_residual = worst_residual


class InconsistentExactData(PreconditionError):
    pass


class AngleInconsistent(PreconditionError):
    pass


class NotDiscrete(PreconditionError):
    pass


class NotDiscreteBelow(PreconditionError):
    pass


class ZeroFrequency(PreconditionError):
    pass


class DimensionCap(PreconditionError):
    pass


# numerical failures
class NoConvergence(NumericalError):
    def __init__(self, message, residual=float("inf")):
        super().__init__(message)
        self.residual = residual


# internal consistency failures; these indicate a bug, not bad input
class NoExactFit(NumericalError):
    pass


class InterpolationMismatch(NumericalError):
    pass
