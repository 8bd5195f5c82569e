class LogGrowthError(Exception):
    """
    Base class of every error raised by the growth and algebra code.
    """
    pass


class NonFiniteCoefficient(LogGrowthError):
    """
    Called when a power series is built from NaN or infinite coefficients.
    """
    pass


class DegreeMismatch(LogGrowthError):
    """
    Called when two series of different truncation degree are combined, or when
    resizing a series would drop non-zero coefficients.
    """
    pass


class VanishingConstantTerm(LogGrowthError):
    """
    Called when the reciprocal of a series with (numerically) zero constant term
    is requested.
    """
    pass


class InvalidMapState(LogGrowthError):
    """
    Called when coefficients cannot describe a normalized map of the disk.
    """
    pass


class NotNormalized(LogGrowthError):
    """
    Called when an operation defined on maps with f'(0) = 1 gets any other map.
    """
    pass


class GridTooSmall(LogGrowthError):
    """
    Called when a circle grid is too coarse for the series sampled on it.
    """
    pass


class GridMismatch(LogGrowthError):
    """
    Called when two circle functions living on different grids are combined.
    """
    pass


class NonRealInput(LogGrowthError):
    """
    Called when boundary data declared real has a significant imaginary part.
    """
    pass


class CuspProximity(LogGrowthError):
    """
    Called when min |f'| on the unit circle drops below the cusp threshold.
    """
    pass


class OriginSingularity(LogGrowthError):
    """
    Called when a quantity singular at zeta = 0 is evaluated there.
    """
    pass


class CuspReached(LogGrowthError):
    """
    Called when the exact quadratic solution is requested past its cusp.
    """
    pass


class NonHerglotzDriver(LogGrowthError):
    """
    Called when a Loewner-Kufarev driver has Re p <= 0 somewhere on the circle.
    """
    pass


class EvaluationTooCloseToBoundary(LogGrowthError):
    """
    Called when a contour variation is evaluated too close to the unit circle.
    """
    pass


class UnsupportedGenerator(LogGrowthError):
    """
    Called when a Virasoro generator without a closed form is requested.
    """
    pass


class ChargeMismatch(LogGrowthError):
    """
    Called when elements of Virasoro algebras with different central charges are
    combined.
    """
    pass


class OutOfRange(LogGrowthError):
    """
    Called when a trajectory or series is queried outside of what it holds.
    """
    pass


class ConfigError(LogGrowthError):
    """
    Called when a run configuration is malformed.
    """
    pass


class UnknownSuite(LogGrowthError):
    """
    Called when an identity suite which does not exist is requested.
    """
    pass


class SpectralUnderresolved(UserWarning):
    """
    Issued when too much spectral energy sits beyond the truncation degree.
    """
    pass
