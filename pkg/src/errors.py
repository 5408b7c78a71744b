"""
Exception hierarchy for the spectral solver.

Every error raised by library code derives from SpectralError so that the CLI
and the orchestrators can tell numeric/configuration failures apart from bugs.
"""
from typing import Optional


class SpectralError(Exception):
    """Base class for all solver errors."""


class ConfigError(SpectralError):
    """Missing config file, unknown key or schema violation."""

    def __init__(self, message: str, key: Optional[str] = None, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.key = key
        self.path = path


class InvalidArchitectureError(SpectralError):
    pass


class InvalidInputError(SpectralError):
    pass


class DimensionMismatchError(SpectralError):
    pass


class NumericDomainError(SpectralError):
    """A non-finite value showed up in parameters, inputs, losses or gradients."""

    def __init__(
        self,
        message: str,
        sample_index: Optional[int] = None,
        target: Optional[int] = None,
        iteration: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.sample_index = sample_index
        self.target = target
        self.iteration = iteration

    def __str__(self) -> str:
        context = []
        if self.target is not None:
            context.append(f"target={self.target}")
        if self.iteration is not None:
            context.append(f"iteration={self.iteration}")
        if self.sample_index is not None:
            context.append(f"sample={self.sample_index}")
        base = super().__str__()
        return f"{base} ({', '.join(context)})" if context else base


class DegenerateDirectionError(SpectralError):
    """The transformed field collapsed to (numerically) zero."""

    def __init__(self, message: str, target: Optional[int] = None, iteration: Optional[int] = None) -> None:
        super().__init__(message)
        self.target = target
        self.iteration = iteration


class UnsupportedQueryError(SpectralError):
    pass


class UnsupportedDegreeError(SpectralError):
    pass


class InvariantViolationError(SpectralError):
    pass


class SingularShiftError(SpectralError):
    pass


class SingularMatrixError(SpectralError):
    pass


class CapacityError(SpectralError):
    def __init__(self, message: str, required_bytes: int) -> None:
        super().__init__(message)
        self.required_bytes = required_bytes


class NonConvergenceError(SpectralError):
    def __init__(self, message: str, delta: float) -> None:
        super().__init__(message)
        self.delta = delta
