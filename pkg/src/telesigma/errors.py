"""Exception hierarchy.

Input problems (a bad curve spec) derive from :class:`InvalidCurve`; broken
internal invariants derive from :class:`PipelineError`.  The CLI maps the
first family to exit code 2 and the second to exit code 3.
"""


class TelesigmaError(Exception):
    pass


class InvalidCurve(TelesigmaError, ValueError):
    pass


class NotCoprime(InvalidCurve):
    pass


class EntryTooSmall(InvalidCurve):
    pass


class NotTelescopic(InvalidCurve):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"telescopic condition fails at index {index}")


class PipelineError(TelesigmaError, ArithmeticError):
    """An invariant that holds by construction was found violated."""


class NotAUnit(PipelineError):
    pass


class NonzeroRemainder(PipelineError):
    pass


class TruncationExceeded(PipelineError):
    pass


class IntegralityViolation(PipelineError):
    pass


class ResidualNotInZLambda(IntegralityViolation):
    pass


class HomogeneityViolation(PipelineError):
    pass


class SymmetryViolation(PipelineError):
    pass


class DeterminantMismatch(PipelineError):
    pass


class LeadingMismatch(PipelineError):
    pass


class LeadingCoefficientNotOne(PipelineError):
    pass


class LeadingTermMismatch(PipelineError):
    pass


class WindowExceeded(PipelineError):
    pass


class StabilizationFailure(PipelineError):
    pass


class GaugeDependence(PipelineError):
    pass
