"""Exception and warning classes raised by hdcompact."""


class HDCompactError(Exception):
    """Base class for errors raised by this package."""


class InvalidRankError(HDCompactError, ValueError):
    """Requested group rank is out of range (n < 1)."""


class IllConditionedError(HDCompactError, ValueError):
    """Matrix is numerically singular for the requested operation."""


class WrongComponentError(HDCompactError, ValueError):
    """Matrix has non-positive determinant, so it lies outside the closure of SL(n)."""


class ChamberError(HDCompactError, ValueError):
    """Cartan vector lies outside the closed positive Weyl chamber."""


class SingularBlockError(HDCompactError, ValueError):
    """A chart block is not invertible."""


class UnreliableFitError(HDCompactError, RuntimeError):
    """A log-log slope fit has residuals above the accepted threshold."""


class StepTooLargeError(HDCompactError, ValueError):
    """Finite-difference step is too large relative to the smallest tau."""


class AmbiguousClusteringWarning(UserWarning):
    """A singular-value gap sits close to the break threshold (chart overlap region)."""
