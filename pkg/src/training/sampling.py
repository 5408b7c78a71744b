"""
Uniform Monte Carlo sample sets over the box domain.
"""
import logging
from dataclasses import dataclass

import torch

from src.errors import InvalidInputError
from src.operators.domain import DomainSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SampleSet:
    points: torch.Tensor
    domain: DomainSpec
    seed: int

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def key(self) -> tuple:
        """Identifies the set for cached snapshot evaluations."""
        return (self.seed, self.size, self.domain)


def sample_domain(domain: DomainSpec, N: int, seed: int = 0) -> SampleSet:
    """N i.i.d. uniform points strictly inside the box; rows hitting a face are redrawn."""
    if N < 1:
        raise InvalidInputError(f"Sample count must be at least 1, got {N}.")
    generator = torch.Generator().manual_seed(int(seed) % (2**64))
    lower, upper = domain.lower, domain.upper
    points = lower + (upper - lower) * torch.rand(N, domain.dim, generator=generator, dtype=torch.float64)
    on_face = ((points <= lower) | (points >= upper)).any(dim=-1)
    while bool(on_face.any()):
        count = int(on_face.sum())
        redraw = torch.rand(count, domain.dim, generator=generator, dtype=torch.float64)
        points[on_face] = lower + (upper - lower) * redraw
        on_face = ((points <= lower) | (points >= upper)).any(dim=-1)
    logger.debug(f"Sampled {N} points in {domain.dim}D (seed={seed}).")
    return SampleSet(points, domain, int(seed))


def boundary_points(domain: DomainSpec, per_face: int, seed: int = 0) -> torch.Tensor:
    """Uniform points on each of the 2D faces of the box, face by face."""
    generator = torch.Generator().manual_seed(int(seed) % (2**64))
    lower, upper = domain.lower, domain.upper
    faces = []
    for axis in range(domain.dim):
        for value in (lower[axis], upper[axis]):
            pts = lower + (upper - lower) * torch.rand(per_face, domain.dim, generator=generator, dtype=torch.float64)
            pts[:, axis] = value
            faces.append(pts)
    return torch.cat(faces, dim=0)
