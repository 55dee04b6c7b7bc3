"""Exception types raised across the package."""


class QWSearchError(Exception):
    """Base class for package errors."""


class ModeError(QWSearchError, ValueError):
    """An operator was applied to a state in the wrong boundary/labeling mode."""


class SizeError(QWSearchError, ValueError):
    """A dense matrix or circuit unitary would exceed the allowed size."""


class FitError(QWSearchError, RuntimeError):
    """The inverse-log fit could not be performed."""


class CircuitError(QWSearchError, ValueError):
    """The requested configuration cannot be lowered to a circuit."""


class TrackingError(QWSearchError, ValueError):
    """Inconsistent tracking configuration or label bookkeeping."""
