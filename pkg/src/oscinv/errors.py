"""Exception types raised by oscinv."""


class OscinvError(ValueError):
    """Base class for all library errors."""


class RegimeError(OscinvError):
    """An operation was called for a damping regime it does not support."""


class SingularStateError(OscinvError):
    """A state lies on a singular set (origin, natural boundary, singular line)."""


class SamplingError(OscinvError):
    """Samples are too coarse to track a phase across its branch cut."""


class RankDeficientError(OscinvError):
    """The feature design matrix does not have full column rank."""


class NaturalBoundaryError(OscinvError):
    """An integration path crosses a divergence locus of the invariant."""


class TrajectoryFormatError(OscinvError):
    """A trajectory file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
