"""Exception hierarchy shared by all modules."""


class HilbertPeriodError(Exception):
    """Base class for every error raised by this package."""


class NotInU0(HilbertPeriodError):
    pass


class DomainError(HilbertPeriodError, ValueError):
    pass


class OnWall(HilbertPeriodError):
    pass


class TableMismatch(HilbertPeriodError):
    pass


class BranchPoint(HilbertPeriodError):
    pass


class ExceptionalLocus(HilbertPeriodError):
    pass


class NoConvergence(HilbertPeriodError):
    pass


class BranchJump(HilbertPeriodError):
    pass


class StepTooCoarse(HilbertPeriodError):
    pass


class TooClose(HilbertPeriodError):
    pass


class NotIntegral(HilbertPeriodError):
    pass


class Degenerate(HilbertPeriodError):
    pass


class UnsupportedType(HilbertPeriodError):
    pass


class RelationFailed(HilbertPeriodError):
    pass


class DualityFailed(HilbertPeriodError):
    pass


class NonTransverse(HilbertPeriodError):
    pass


class DegeneratePeriods(HilbertPeriodError):
    pass


class ComponentAmbiguous(HilbertPeriodError):
    pass


class CuspPoint(HilbertPeriodError):
    pass
