"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for all geometric errors raised by this package."""


class DomainError(GeometryError):
    """A point, boundary point, or parameter is outside its model's domain."""


class DegenerateSegmentError(GeometryError):
    """Geodesic construction was asked to join a point to itself."""


class ArityError(GeometryError):
    """Mismatch between a product space and the arity of its arguments."""


class ConvergenceError(GeometryError):
    """A numeric limit did not converge within its evaluation horizon."""


class InvalidSliceError(GeometryError):
    """A slice specification violates the slice constraints."""


class NotInSliceError(GeometryError):
    """A point handed to a chart operation does not lie in the slice."""


class NetConnectivityError(GeometryError):
    """An epsilon-net graph is disconnected on the sampled region."""


class NoPathError(GeometryError):
    """A shortest-path query has no finite answer."""


class UsageError(GeometryError):
    """A request is structurally valid but not meaningful (CLI exit code 2)."""


class SpecSyntaxError(GeometryError):
    """Space-spec text failed to parse; carries the byte offset of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.bare_message = message
