"""Exception types shared across the package."""


class RadarHrError(Exception):
    """Base class for all radarhr errors."""


class InvalidArgumentError(RadarHrError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(RadarHrError, ValueError):
    """Input exceeds a representable size bound."""


class OverDecompositionError(InvalidArgumentError):
    """Requested more modes than the signal length supports."""


class DegenerateInputError(InvalidArgumentError):
    """Input is structurally valid but carries no usable information."""


class DataFormatError(RadarHrError):
    """A file or config payload does not match its declared schema."""


class NumericalError(RadarHrError):
    """A computation produced non-finite or otherwise unusable values."""
