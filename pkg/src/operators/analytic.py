"""
Analytic ground truth for the three operators.
"""
import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import torch

from src.errors import InvalidInputError, UnsupportedQueryError
from src.engine.jets import Jet2, as_batch
from src.operators.differential import potential_jet
from src.operators.domain import OperatorKind, OperatorSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalyticSolution:
    eigenvalues: Tuple[float, ...]
    eigenfunction_eval: Optional[Callable[[torch.Tensor], torch.Tensor]] = None


def known_count(op: OperatorSpec) -> Optional[int]:
    """How many eigenvalues are known in closed form (None = unbounded)."""
    if op.kind is OperatorKind.HARMONIC:
        return None
    return 1


def harmonic_eigenvalues(dim: int, count: int) -> Tuple[float, ...]:
    """First `count` values of pi^2 * sum n_k^2, n_k >= 1, with multiplicity."""
    # a tuple is only grown at or after its last grown axis, so every tuple has a single parent
    start = (1,) * dim
    heap = [(dim, start, 0)]
    sums = []
    while len(sums) < count:
        total, ns, pivot = heapq.heappop(heap)
        sums.append(total)
        for axis in range(pivot, dim):
            grown = ns[:axis] + (ns[axis] + 1,) + ns[axis + 1 :]
            heapq.heappush(heap, (total + 2 * ns[axis] + 1, grown, axis))
    return tuple(math.pi**2 * s for s in sums)


def reference_jet(op: OperatorSpec, x: torch.Tensor) -> Jet2:
    """Jet of the reference (principal) eigenfunction."""
    x = as_batch(x, op.dim)
    N, D = x.shape
    if op.kind is OperatorKind.HARMONIC:
        s = math.sqrt(2.0) * torch.sin(math.pi * x)
        ds = math.sqrt(2.0) * math.pi * torch.cos(math.pi * x)
        d2s = -(math.pi**2) * s
        value = torch.prod(s, dim=-1)
        grad = torch.stack([ds[:, k] * torch.prod(s[:, [j for j in range(D) if j != k]], dim=-1) for k in range(D)], dim=-1)
        hess = torch.empty(N, D, D, dtype=x.dtype)
        for k in range(D):
            for l in range(D):
                rest = torch.prod(s[:, [j for j in range(D) if j not in (k, l)]], dim=-1)
                hess[:, k, l] = d2s[:, k] * rest if k == l else ds[:, k] * ds[:, l] * rest
        return Jet2(value, grad, hess)
    if op.kind is OperatorKind.OSCILLATOR:
        value = math.pi ** (-D / 4.0) * torch.exp(-0.5 * (x * x).sum(-1))
        grad = -x * value[:, None]
        eye = torch.eye(D, dtype=x.dtype)
        hess = value[:, None, None] * (x.unsqueeze(-1) * x.unsqueeze(-2) - eye)
        return Jet2(value, grad, hess)

    V = potential_jet(op, x)
    value = torch.exp(-V.value)
    grad = -value[:, None] * V.gradient
    outer = V.gradient.unsqueeze(-1) * V.gradient.unsqueeze(-2)
    return Jet2(value, grad, value[:, None, None] * (outer - V.hessian))


def analytic_spectrum(op: OperatorSpec, count: int) -> AnalyticSolution:
    if count < 1:
        raise InvalidInputError(f"count must be at least 1, got {count}.")
    limit = known_count(op)
    if limit is not None and count > limit:
        raise UnsupportedQueryError(
            f"Only {limit} eigenvalue(s) of the {op.kind.value} operator are known analytically; {count} requested."
        )

    def evaluate(x: torch.Tensor) -> torch.Tensor:
        return reference_jet(op, x).value

    if op.kind is OperatorKind.HARMONIC:
        values = harmonic_eigenvalues(op.dim, count)
    elif op.kind is OperatorKind.OSCILLATOR:
        values = (op.dim / 2.0,)
    else:
        values = (0.0,)
    return AnalyticSolution(values, evaluate)
