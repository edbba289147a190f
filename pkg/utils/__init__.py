"""Utility modules shared by services and handlers."""
from utils.errors import (
    RpiNormError, ValidationError, DomainError, NumericalError, CapacityError
)
from utils.halving import shrink_until_stable, HalvingResult, HalvingExhaustedError

__all__ = [
    'RpiNormError',
    'ValidationError',
    'DomainError',
    'NumericalError',
    'CapacityError',
    'shrink_until_stable',
    'HalvingResult',
    'HalvingExhaustedError',
]
