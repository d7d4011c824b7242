"""Exception types shared across the package."""


class NumacapError(ValueError):
    """Base class for all errors raised by this package."""


class TopologyError(NumacapError):
    """Malformed topology id, invalid parameters, or an unusable graph."""


class DimensionError(NumacapError):
    """Capacity vector length does not match the topology vertex count."""


class CapacityError(NumacapError):
    """Capacity entry is not an integer in [0, 2**32 - 1]."""


class ScaleLimitError(NumacapError):
    """Instance exceeds the size bounds of an exhaustive routine."""


class PlacementError(NumacapError):
    """A placement violates adjacency or per-node capacity."""


class ResourceError(NumacapError):
    """Missing or non-positive resource amount in a demand or free-list."""


class SchemaError(NumacapError):
    """Invalid input document; message names the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
