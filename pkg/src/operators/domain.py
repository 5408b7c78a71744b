"""
Domain and operator descriptors.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import torch

from src.errors import InvalidInputError


class Boundary(str, Enum):
    DIRICHLET_ZERO = "dirichlet-zero"
    PERIODIC = "periodic"
    FREE_DECAY = "free-decay"


class OperatorKind(str, Enum):
    HARMONIC = "harmonic"
    OSCILLATOR = "oscillator"
    FOKKER_PLANCK = "fokker_planck"


@dataclass(frozen=True)
class DomainSpec:
    dim: int
    box: Tuple[Tuple[float, float], ...]
    boundary: Boundary

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInputError(f"Domain dimension must be positive, got {self.dim}.")
        if len(self.box) != self.dim:
            raise InvalidInputError(f"Box has {len(self.box)} intervals for dimension {self.dim}.")
        for k, (a, b) in enumerate(self.box):
            if not a < b:
                raise InvalidInputError(f"Axis {k}: interval [{a}, {b}] is empty.")

    @classmethod
    def cube(cls, dim: int, a: float, b: float, boundary: Boundary) -> "DomainSpec":
        return cls(dim, tuple((float(a), float(b)) for _ in range(dim)), boundary)

    @property
    def lower(self) -> torch.Tensor:
        return torch.tensor([a for a, _ in self.box], dtype=torch.float64)

    @property
    def upper(self) -> torch.Tensor:
        return torch.tensor([b for _, b in self.box], dtype=torch.float64)


@dataclass(frozen=True)
class OperatorSpec:
    kind: OperatorKind
    domain: DomainSpec
    fp_coeffs: Tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        d = self.domain
        if self.kind is OperatorKind.HARMONIC:
            if d.boundary is not Boundary.DIRICHLET_ZERO or any(iv != (0.0, 1.0) for iv in d.box):
                raise InvalidInputError("Harmonic operator lives on [0,1]^D with zero Dirichlet data.")
        elif self.kind is OperatorKind.FOKKER_PLANCK:
            if d.boundary is not Boundary.PERIODIC or any(iv != (0.0, 2 * math.pi) for iv in d.box):
                raise InvalidInputError("Fokker-Planck operator lives on the periodic box [0,2pi]^D.")
            if len(self.fp_coeffs) != d.dim:
                raise InvalidInputError(f"Expected {d.dim} Fokker-Planck coefficients, got {len(self.fp_coeffs)}.")
            if any(not 0.1 <= c <= 1.0 for c in self.fp_coeffs):
                raise InvalidInputError(f"Fokker-Planck coefficients must lie in [0.1, 1], got {self.fp_coeffs}.")
        elif d.boundary is not Boundary.FREE_DECAY:
            raise InvalidInputError("Oscillator uses a free-decay (truncated) box.")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @classmethod
    def harmonic(cls, dim: int) -> "OperatorSpec":
        return cls(OperatorKind.HARMONIC, DomainSpec.cube(dim, 0.0, 1.0, Boundary.DIRICHLET_ZERO))

    @classmethod
    def oscillator(cls, dim: int, box: Optional[Sequence[Tuple[float, float]]] = None) -> "OperatorSpec":
        if box is None:
            domain = DomainSpec.cube(dim, -5.0, 5.0, Boundary.FREE_DECAY)
        else:
            domain = DomainSpec(dim, tuple((float(a), float(b)) for a, b in box), Boundary.FREE_DECAY)
        return cls(OperatorKind.OSCILLATOR, domain)

    @classmethod
    def fokker_planck(cls, coeffs: Sequence[float]) -> "OperatorSpec":
        coeffs = tuple(float(c) for c in coeffs)
        domain = DomainSpec.cube(len(coeffs), 0.0, 2 * math.pi, Boundary.PERIODIC)
        return cls(OperatorKind.FOKKER_PLANCK, domain, coeffs)
