"""Exception hierarchy shared by all modules."""


class CircleGeoError(Exception):
    """Base class for library errors."""


class DomainError(CircleGeoError, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularModeError(DomainError):
    """A Fourier mode hits a zero of an inertia multiplier."""

    def __init__(self, mode, message=None):
        self.mode = int(mode)
        super().__init__(message or f"singular inertia multiplier at mode n={self.mode}")


class BlowUpError(CircleGeoError, RuntimeError):
    """Time integration lost validity (non-finite state, unresolved spectrum,
    or a diffeomorphism that stopped being monotone).

    ``time`` is the last time at which the state was still valid and
    ``partial`` holds whatever was computed up to that point (may be None).
    """

    def __init__(self, time, message, partial=None):
        self.time = float(time)
        self.partial = partial
        super().__init__(f"{message} (last valid t={self.time:.6g})")


class ConfigError(CircleGeoError, ValueError):
    """An experiment configuration is malformed or inconsistent."""
