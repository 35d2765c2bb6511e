"""Exception types shared across the package."""


class FibrocubeError(Exception):
    """Base class for all fibrocube errors."""


class DimensionError(FibrocubeError):
    """Dimension out of the supported range for the requested operation."""


class DimensionMismatchError(FibrocubeError):
    """Operands have incompatible dimensions."""


class UnknownVertexError(FibrocubeError):
    """A bit value is not a vertex of the graph in question."""


class MatrixNotGoodError(FibrocubeError):
    """Matrix maps some vertex outside the cube (or is singular).

    ``witness`` is the offending vertex bit value when one exists.
    """

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class NotAPathError(FibrocubeError):
    """The given vertices do not form the required path."""


class InvalidCoordinatesError(FibrocubeError):
    """Coordinate indices outside 1..n or otherwise ill-formed."""


class UnsupportedMatrixError(FibrocubeError):
    """No synthesizer is available for this matrix."""


class GroupNotClosedError(FibrocubeError):
    """Element set is not closed under multiplication.

    ``witness`` is an (i, j) index pair whose product is missing.
    """

    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class RoutingInternalError(FibrocubeError):
    """A synthesizer produced an invalid plan; indicates a bug, not bad input."""
