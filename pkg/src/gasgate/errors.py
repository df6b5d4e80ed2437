"""Exception types shared across the package."""


class GasgateError(Exception):
    """Base class for all errors raised by this package."""


class DataFormatError(GasgateError):
    """Input file or record does not satisfy the CSV/data contract."""


class SingleClassError(GasgateError):
    """A classifier fit was attempted on data containing only one class."""


class PerfectSeparationError(GasgateError):
    """Unregularized logistic fit diverged because the classes are separable."""


class IntervalSolverError(GasgateError):
    """The probability level set could not be reduced to a single interval."""


class GenerationError(GasgateError):
    """Synthetic data generation could not satisfy the requested constraints."""
