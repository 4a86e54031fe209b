class DivGraphError(ValueError):
    """Base class for all validation and domain errors raised by divgraph."""


class InvalidGraphSpec(DivGraphError):
    pass


class DisconnectedGraph(DivGraphError):
    pass


class NonPositiveEdgeLength(DivGraphError):
    pass


class DuplicateEdgeId(DivGraphError):
    pass


class PointNotOnGraph(DivGraphError):
    pass


class GraphMismatch(DivGraphError):
    pass


class InvalidRange(DivGraphError):
    pass


class DegreeMismatch(DivGraphError):
    pass


class NonEffectiveDivisor(DivGraphError):
    pass


class ParameterOutOfRange(DivGraphError):
    pass


class ZeroDegreeInput(DivGraphError):
    pass


class KappaTooSmall(DivGraphError):
    pass


class NotInHull(DivGraphError):
    pass


class CertificateFailed(DivGraphError):
    """Raised in strict mode when a reduced-divisor certificate does not hold."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InvalidDivisorSpec(DivGraphError):
    pass
