"""Exception hierarchy shared by every module of the package."""


class MaxSurfError(Exception):
    """Base class for all package errors."""


class UnitModulusInput(MaxSurfError, ValueError):
    pass


class NotAnIsometry(MaxSurfError, ValueError):
    pass


class UnsupportedGroup(MaxSurfError):
    pass


class NotFreeProper(MaxSurfError):
    pass


class PoleHit(MaxSurfError, ZeroDivisionError):
    pass


class OffCurve(MaxSurfError, ValueError):
    pass


class BranchTooClose(MaxSurfError):
    pass


class ContinuationAmbiguous(MaxSurfError):
    pass


class RootFindingFailed(MaxSurfError):
    pass


class PoleOnPath(MaxSurfError):
    pass


class ToleranceNotReached(MaxSurfError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class Unroutable(MaxSurfError):
    pass


class NotClosed(MaxSurfError):
    pass


class EnclosureViolation(MaxSurfError):
    pass


class NotUnitModulus(MaxSurfError):
    pass


class WindingUnstable(MaxSurfError):
    pass


class AnnulusContaminated(MaxSurfError):
    pass


class NonSimpleScherkPole(MaxSurfError):
    pass


class ResidueImbalance(MaxSurfError):
    pass


class OddVl(MaxSurfError):
    pass


class RankMismatch(MaxSurfError):
    pass


class ParamOutOfRange(MaxSurfError, ValueError):
    pass


class SymmetryFailed(MaxSurfError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class MeshDegenerate(MaxSurfError):
    pass


class SurfaceFileError(MaxSurfError, ValueError):
    """Raised when a surface description file is malformed."""
