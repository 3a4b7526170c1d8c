class ArcflexError(Exception):
    """Base class of all errors raised by arcflex."""

    def __init__(self, message="arcflex failed"):
        self.message = message
        super().__init__(self.message)


class ValidationError(ArcflexError):
    """Raised when an input framework description violates the schema or the
    framework invariants.

    All violations found while validating are kept in ``violations`` (the
    raised error is the first of them).
    """

    def __init__(self, message="invalid framework", violations=None):
        super().__init__(message)
        self.violations = violations if violations is not None else [self]


class SchemaError(ValidationError):

    def __init__(self, message="framework description does not match schema"):
        super().__init__(message)


class DuplicateEdgeError(ValidationError):

    def __init__(self, message="duplicate edge"):
        super().__init__(message)


class UnknownVertexError(ValidationError):

    def __init__(self, message="edge refers to an unknown vertex"):
        super().__init__(message)


class NonPositiveLengthError(ValidationError):

    def __init__(self, message="rest length must be positive"):
        super().__init__(message)


class InsufficientPinsError(ValidationError):
    """Raised when the pinned vertices leave a rigid-body motion free."""

    def __init__(self, message="insufficient pins"):
        super().__init__(message)


class DimensionMismatchError(ValidationError):

    def __init__(self, message="configuration does not match framework"):
        super().__init__(message)


class ComputationError(ArcflexError):
    """Base class of numerical failures."""

    def __init__(self, message="computation failed"):
        super().__init__(message)


class OrderOutOfRangeError(ComputationError):

    def __init__(self, message="order out of range"):
        super().__init__(message)


class PreconditionError(ComputationError):

    def __init__(self, message="precondition violated"):
        super().__init__(message)


class ConvergenceError(ComputationError):
    """Raised when the Gauss-Newton projection does not reach the constraint
    manifold within the iteration limit."""

    def __init__(self, message="projection did not converge", log=None):
        super().__init__(message)
        self.log = log


class NoFlexDirectionError(ComputationError):

    def __init__(self, message="no flex direction"):
        super().__init__(message)


class DegenerateFitError(ComputationError):

    def __init__(self, message="degenerate fit: no variance in log s"):
        super().__init__(message)


class InfeasibleCuspError(ComputationError):

    def __init__(self, message="cusp flexes require a < 0"):
        super().__init__(message)


class StageError(ComputationError):
    """Wraps the failure of one named stage of a multi-stage analysis."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
