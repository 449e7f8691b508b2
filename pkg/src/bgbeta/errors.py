"""Exception types shared across the package."""


class BgbetaError(Exception):
    """Base class for all bgbeta errors."""


class NotPositiveDefinite(BgbetaError):
    """A matrix that must be positive definite has a pivot at or below tolerance."""


class NoConvergence(BgbetaError):
    """An iterative linear-algebra routine exceeded its sweep budget."""


class DimensionMismatch(BgbetaError):
    """Operands have incompatible dimensions."""


class DomainError(BgbetaError):
    """A parameter lies outside the domain where the quantity is defined."""


class PartitionOutOfRange(BgbetaError):
    """A partition exceeds the degree or part-count limits of a table."""


class DegreeTooLarge(BgbetaError):
    """Requested zonal degree exceeds the configured cap."""


class DivergentSeries(BgbetaError):
    """A hypergeometric series with p > q + 1 shows no tail decay."""


class SpectralRadiusTooLarge(BgbetaError):
    """Closed-form evaluation requires spectral radius strictly below 1."""


class NotConverged(BgbetaError):
    """A truncated series did not meet its tolerance within the degree budget."""
