"""Exception hierarchy shared by every qdeg module."""


class QdegError(Exception):
    """Base class for all errors raised by qdeg."""


class ShapeMismatch(QdegError, ValueError):
    pass


class DomainError(QdegError, ValueError):
    pass


class CompletenessViolation(QdegError, ValueError):
    """Kraus operators do not sum to the identity."""


class NotCompletelyPositive(QdegError, ValueError):
    pass


class NotTracePreserving(QdegError, ValueError):
    pass


class DimensionMetadataMissing(QdegError, ValueError):
    pass


class SolverError(QdegError, RuntimeError):
    """Base class for failures inside the SDP layer."""


class NumericalFailure(SolverError):
    pass


class Infeasible(SolverError):
    pass
