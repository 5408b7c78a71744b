# Spectral transformation network eigenvalue solver
__version__ = "0.1.0"

from .validation_suite import ValidationSuite

__all__ = [
    "ValidationSuite",
]
