"""Exception types shared across the toolkit."""


class FovsampleError(Exception):
    """Base class for all toolkit errors."""


class InvalidSpec(FovsampleError):
    """A grid specification violates its invariants."""


class InfeasibleGrid(FovsampleError):
    """The requested target size cannot be realized with strictly
    increasing sample indices inside the source extent."""


class OutOfBounds(FovsampleError):
    """A coordinate lies outside the image it was declared in."""


class DimensionMismatch(FovsampleError):
    """Image and grid (or target) dimensions disagree."""


class DecodeError(FovsampleError):
    """An image file could not be decoded."""


class UnsupportedFormat(FovsampleError):
    """The image format is not supported for this operation."""


class IoFailure(FovsampleError):
    """An underlying file operation failed."""


class SpaceMismatch(FovsampleError):
    """Two boxes live in different coordinate spaces."""


class DegenerateBox(FovsampleError):
    """A transformed box collapsed below one pixel of extent."""


class DegenerateFit(FovsampleError):
    """The eccentricity table is not strictly increasing."""


class MalformedJson(FovsampleError):
    """Input JSON could not be parsed."""


class MissingField(FovsampleError):
    """A required field or referenced record is absent."""


class EmptyAfterFilter(FovsampleError):
    """Filtering left no usable annotations."""


class UnknownEntry(FovsampleError):
    """A detection references an entry absent from the manifest."""
