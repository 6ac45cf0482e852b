# equinorm/exceptions.py
from django.core.exceptions import ValidationError


class ArgumentError(ValidationError):
    """Bad input to a library operation; same family as form validation errors."""


class EquinormError(Exception):
    """Base class for failures that are not plain argument errors."""


class SizeCapError(EquinormError):
    """An exhaustive oracle or generator would exceed its configured cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class InfeasibleError(EquinormError):
    pass


class PreconditionError(EquinormError):
    pass


class NumericError(EquinormError):
    """A solver failed to converge or lost accuracy."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class NonterminationError(EquinormError):
    pass


class CertificateViolation(EquinormError):
    """A measured ratio exceeds the claimed approximation factor."""

    def __init__(self, message, measured=None, claimed=None):
        super().__init__(message)
        self.measured = measured
        self.claimed = claimed
