"""Exception types raised by the numerical routines.

Construction-time validation of value types raises plain ValueError;
the classes below cover runtime conditions of the solvers and emitters.
"""


class HeunradError(Exception):
    """Base class for all heunrad runtime errors."""


class BranchUnavailableError(HeunradError):
    """The exponent-0 Frobenius branch at z=0 does not exist (beta is a
    negative integer, so the series recurrence denominator vanishes)."""


class DidNotConvergeError(HeunradError):
    """The error controller could not meet the requested tolerance."""


class SingularPointError(HeunradError):
    """Evaluation requested at (or across) a singular point of the ODE."""


class NotIrregularError(HeunradError):
    """No irregular-point scaling exists (the exponential parameter is zero)."""


class OutOfDomainError(HeunradError):
    """Position outside the validity domain of the requested solution."""


class StepTooLargeError(HeunradError):
    """Finite-difference step too large for the evaluation point."""


class OnHorizonError(HeunradError):
    """Radial coefficients requested on a horizon."""


class TooCloseToPoleError(HeunradError):
    """Angular residual requested too close to theta = 0 or pi."""


class OrderExceedsDegreeError(HeunradError):
    """Associated Legendre order |n| exceeds the degree l."""


class IntervalContainsSingularityError(HeunradError):
    """Integration interval contains r=0 or the horizon r=2M."""


class DivisionBySingularAreaError(HeunradError):
    """The metric area function vanishes at the requested radius."""


class CurveEvaluationError(HeunradError):
    """A curve sample failed; carries the failing point index and coordinate."""
