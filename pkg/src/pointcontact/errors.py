"""Exception hierarchy.

Hypothesis violations (the coupled problem does not satisfy the assumptions
under which the weak-coupling expansion exists) are kept apart from
continuation failures and plain input errors, so callers such as the command
line front end can map them to distinct exit codes.
"""


class PointContactError(Exception):
    """Base class of all errors raised by this package."""


class SingularMatrix(PointContactError):
    pass


class NotHermitian(PointContactError, ValueError):
    pass


class NotHerglotz(PointContactError, ValueError):
    pass


class OutOfInterval(PointContactError, ValueError):
    pass


class NonRealDeterminant(PointContactError):
    """A quantity that must be real on the working interval carries an
    imaginary part above tolerance, which points at a branch-convention bug."""


class NoSignChange(PointContactError):
    pass


class HypothesisViolation(PointContactError):
    """The unperturbed eigenvalue problem violates a precondition of the
    weak-coupling expansion."""


class NotEigenvalue(HypothesisViolation):
    pass


class NotSimple(HypothesisViolation):
    pass


class NotResolventPoint(HypothesisViolation):
    pass


class ZeroDenominator(HypothesisViolation):
    pass


class DimensionMismatch(HypothesisViolation, ValueError):
    pass


class ContinuationError(PointContactError):
    pass


class NewtonDiverged(ContinuationError):
    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class BracketLost(ContinuationError):
    pass


class LeftInterval(ContinuationError):
    pass


class InsufficientSamples(ContinuationError, ValueError):
    pass


class ConfigError(PointContactError, ValueError):
    pass
