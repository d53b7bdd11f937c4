"""Exception types shared across the package."""


class SpinampError(Exception):
    """Base class for package-specific failures."""


class ConfigurationError(SpinampError):
    """A run configuration or model specification is invalid."""


class NumericalIntegrityError(SpinampError):
    """A computed quantity violated a numerical sanity bound."""


class ConvergenceError(SpinampError):
    """An iterative/quadrature computation failed its convergence check."""
