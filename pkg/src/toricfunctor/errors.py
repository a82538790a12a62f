"""Exception types shared across the package."""


class ToricError(Exception):
    """Base class for errors raised by this package."""


class InputError(ToricError, ValueError):
    """Input violates a documented precondition."""


class NonSpanningTarget(InputError):
    """Target rays do not span N_R; the torus factor must be split off first."""


class InvariantViolation(ToricError):
    """An internal cross-check disagreed. Signals a bug or bad input data."""


class DeadlineExceeded(ToricError):
    """A caller-supplied deadline passed before a computation finished."""


class EnumerationCapExceeded(ToricError):
    """A point enumeration would exceed the configured cap."""
