"""Exception hierarchy shared across the package."""


class RadineqError(Exception):
    """Base class for all package errors."""


class DomainError(RadineqError):
    """Input outside an operation's valid domain (e.g. radius out of range)."""


class ParameterError(RadineqError):
    """Inequality parameters outside a theorem's hypotheses."""


class ConvergenceError(RadineqError):
    """An iterative limit or extrapolation failed to settle."""


class IntegrabilityError(RadineqError):
    """A requested integral diverges (non-integrable singularity)."""


class DegenerateInputError(RadineqError):
    """Zero denominator or otherwise degenerate quotient input."""


class ConfigError(RadineqError):
    """Run configuration is malformed or violates theorem preconditions."""
