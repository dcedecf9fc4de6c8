"""Exception types raised by vlamap."""


class VlamapError(Exception):
    """Base class for all vlamap errors."""


class ConfigurationError(VlamapError, ValueError):
    """Invalid grid sizes, domain parameters, shapes or option values."""


class ConfigParseError(ConfigurationError):
    """Malformed configuration file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateInputError(VlamapError, ValueError):
    """Input has no usable structure (e.g. a constant profile)."""


class PreconditionError(VlamapError, ValueError):
    """A documented operation precondition was violated."""


class RootNotFoundError(VlamapError, ArithmeticError):
    """Bracketed root search failed; carries the bracket diagnostics."""


class StateError(VlamapError, RuntimeError):
    """Operation called on an object in an unusable state."""


class BlowUpError(VlamapError, FloatingPointError):
    """Time integration produced non-finite values."""


class InsufficientDataError(VlamapError, ValueError):
    """Not enough data points for the requested fit or estimate."""
