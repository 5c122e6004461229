"""Exception hierarchy.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical failures with 3 and I/O problems with 4.
"""


class SfwmError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SfwmError):
    """Invalid, incomplete or contradictory configuration input."""


class NumericsError(SfwmError):
    """Base class for numerical failures (solver, fit, quadrature)."""


class RangeError(NumericsError):
    """A wavelength or frequency lies outside a model's validity window."""


class EvaluationError(NumericsError):
    """Evaluation failed: pole proximity, overflow, fit quality, lost accuracy."""


class ModeSolveError(NumericsError):
    """The guided-mode solver could not bracket or refine a root."""
