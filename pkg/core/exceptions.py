"""
Errors and warnings raised by the kernel calculus, the solver and the harness.
"""


class KernelCalculusError(Exception):
    """Base class for every error raised by this package"""


class InvalidMesh(KernelCalculusError):
    """Grid points are not 0 = t_0 < t_1 < ... < t_N, or not finite"""


class ShapeError(KernelCalculusError):
    """Operands have incompatible row counts or lengths"""


class SingularKernel(KernelCalculusError):
    """A diagonal entry (or a_0 for sequences) is zero, so no inverse exists"""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class NonConvergence(KernelCalculusError):
    """The scalar solve of an implicit step failed"""

    def __init__(self, message: str, step: int | None = None, iterations: int = 0):
        super().__init__(message)
        self.step = step
        self.iterations = iterations


class SpecParseError(KernelCalculusError):
    """A mesh spec, kernel source or input file could not be parsed"""


class UnknownRightHandSide(KernelCalculusError):
    """Name not present in the right-hand side registry"""


class SolvabilityWarning(UserWarning):
    """M * a^n_0 >= 1 for some step: unique solvability is not guaranteed"""


class ConditioningWarning(UserWarning):
    """Two mathematically equivalent criteria disagree beyond roundoff"""
