"""Exception hierarchy shared by the services and the CLI."""


class RpiNormError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RpiNormError, ValueError):
    """Raised when an input document or value is malformed."""


class DomainError(ValidationError):
    """Raised when an operation is applied outside its domain."""


class NumericalError(RpiNormError):
    """Raised when a numerical procedure fails to converge or self-check."""

    def __init__(self, message: str, last_value: float = None):
        super().__init__(message)
        self.last_value = last_value


class CapacityError(NumericalError):
    """Raised when a search exceeds its configured capacity."""

    def __init__(self, message: str, capacity: int = None):
        super().__init__(message)
        self.capacity = capacity
