"""Exception hierarchy shared by all centroid_lab modules."""


class CentroidLabError(Exception):
    """Base class for every error raised by centroid_lab."""


class DegenerateInput(CentroidLabError, ValueError):
    """Point set does not span the ambient space."""


class NotSymmetric(CentroidLabError, ValueError):
    """A vertex has no antipodal partner."""


class BadDirection(CentroidLabError, ValueError):
    """Direction lies in the bad set: the top vertex height is tied."""


class UnsupportedDimension(CentroidLabError, NotImplementedError):
    pass


class LPFailure(CentroidLabError, RuntimeError):
    pass


class NoSamples(CentroidLabError, RuntimeError):
    pass


class PreconditionViolation(CentroidLabError, ValueError):
    pass


class FrameFailure(CentroidLabError, RuntimeError):
    pass


class InterpolationInstability(CentroidLabError, RuntimeError):
    pass


class OutOfRange(CentroidLabError, ValueError):
    pass


class DomainError(CentroidLabError, ValueError):
    pass


class VolumeNotNormalized(CentroidLabError, ValueError):
    pass


class PrecisionLoss(CentroidLabError, ArithmeticError):
    pass


class DimensionMismatch(CentroidLabError, ValueError):
    pass


class InsufficientPoints(CentroidLabError, ValueError):
    pass


class NotContained(CentroidLabError, ValueError):
    pass


class ParseError(CentroidLabError, ValueError):
    """Malformed body file; ``line`` is 1-based, ``column`` is 1-based or None."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
