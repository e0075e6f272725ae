"""Exception hierarchy shared across the package."""


class DeltaDistillError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(DeltaDistillError, ValueError):
    """Operands have incompatible shapes; message names the offending extents."""


class ConfigurationError(DeltaDistillError, ValueError):
    """Invalid configuration (bad keys, impossible geometry, out-of-range values)."""


class ScheduleViolationError(DeltaDistillError, RuntimeError):
    """A non-key frame was requested before any key-frame populated the state."""


class NumericalError(DeltaDistillError, FloatingPointError):
    """NaN/Inf detected, or an optimisation step aborted on a bad loss."""


class GradientError(DeltaDistillError, RuntimeError):
    """Backward-pass misuse: missing gradients or a non-scalar loss."""
