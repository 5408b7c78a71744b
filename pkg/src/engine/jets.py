"""
Second-order jets of the network at a batch of points.

A Jet2 carries value, gradient and Hessian per sample. The first level is
forward-propagated in closed form by NetworkParams.propagate; the nested level
differentiates that bundle once more with torch.autograd.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import torch

from src.errors import DimensionMismatchError, NumericDomainError
from src.engine.network import NetworkParams, has_finite_parameters

logger = logging.getLogger(__name__)


def symmetrize(H: torch.Tensor) -> torch.Tensor:
    """Mirror the upper triangle of the last two axes onto the lower one."""
    return torch.triu(H) + torch.triu(H, diagonal=1).transpose(-1, -2)


@dataclass
class Jet2:
    """Value (N,), gradient (N, D) and symmetric Hessian (N, D, D) of a scalar field."""

    value: torch.Tensor
    gradient: torch.Tensor
    hessian: torch.Tensor

    @property
    def dim(self) -> int:
        return self.gradient.shape[-1]

    def laplacian(self) -> torch.Tensor:
        return torch.diagonal(self.hessian, dim1=-2, dim2=-1).sum(-1)

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.gradient + other.gradient, self.hessian + other.hessian)

    def __mul__(self, c: float) -> "Jet2":
        return Jet2(c * self.value, c * self.gradient, c * self.hessian)

    __rmul__ = __mul__

    def detach(self) -> "Jet2":
        return Jet2(self.value.detach(), self.gradient.detach(), self.hessian.detach())


@dataclass
class NestedJet2:
    """Jet2 whose entries are Jet2 themselves: outer derivatives of u, grad u and Hess u."""

    value: Jet2
    gradient: List[Jet2]
    hessian: List[List[Jet2]]

    def collapse(self) -> Jet2:
        D = len(self.gradient)
        grad = torch.stack([self.gradient[a].value for a in range(D)], dim=-1)
        rows = [torch.stack([self.hessian[a][b].value for b in range(D)], dim=-1) for a in range(D)]
        return Jet2(self.value.value, grad, torch.stack(rows, dim=-2))

    def grad_laplacian(self) -> torch.Tensor:
        """(N, D) gradient of the Laplacian."""
        D = len(self.gradient)
        return sum(self.hessian[a][a].gradient for a in range(D))

    def biharmonic(self) -> torch.Tensor:
        """(N,) values of Laplacian(Laplacian u)."""
        D = len(self.gradient)
        return sum(self.hessian[a][a].laplacian() for a in range(D))


def as_batch(x: torch.Tensor, dim: Optional[int] = None) -> torch.Tensor:
    x = torch.as_tensor(x, dtype=torch.float64)
    if x.dim() == 1:
        x = x.unsqueeze(0)
    if x.dim() != 2:
        raise DimensionMismatchError(f"Expected points of shape (N, D), got {tuple(x.shape)}.")
    if dim is not None and x.shape[1] != dim:
        raise DimensionMismatchError(f"Points have dimension {x.shape[1]}, expected {dim}.")
    return x


def check_finite_inputs(net, x: torch.Tensor) -> None:
    if not has_finite_parameters(net):
        raise NumericDomainError("Network parameters contain non-finite values.")
    bad = (~torch.isfinite(x)).any(dim=-1).nonzero()
    if bad.numel():
        raise NumericDomainError("Input point is not finite.", sample_index=int(bad[0]))


def eval_jet(params: NetworkParams, x: torch.Tensor) -> Jet2:
    """Exact value, gradient and Hessian of the raw network at each row of x."""
    x = as_batch(x, params.input_dim)
    check_finite_inputs(params, x)
    N, D = x.shape
    J0 = torch.eye(D, dtype=x.dtype).expand(N, D, D)
    H0 = torch.zeros(N, D, D, D, dtype=x.dtype)
    u, J, H = params.propagate(x, J0, H0)
    return Jet2(u[:, 0], J[:, 0], symmetrize(H[:, 0]))


def jet_of(field: torch.Tensor, x: torch.Tensor) -> Jet2:
    """Jet of a per-sample scalar field already depending on x through the autograd graph."""
    D = x.shape[1]
    if not field.requires_grad:
        zeros = torch.zeros_like(x)
        return Jet2(field, zeros, torch.zeros(*x.shape, D, dtype=x.dtype))
    (grad,) = torch.autograd.grad(field.sum(), x, create_graph=True, allow_unused=True)
    if grad is None:
        grad = torch.zeros_like(x)
    rows = []
    for a in range(D):
        if grad[:, a].requires_grad:
            (row,) = torch.autograd.grad(grad[:, a].sum(), x, create_graph=True, allow_unused=True)
        else:
            row = None
        rows.append(torch.zeros_like(x) if row is None else row)
    return Jet2(field, grad, symmetrize(torch.stack(rows, dim=-2)))


def eval_nested_jet(params: NetworkParams, x: torch.Tensor) -> NestedJet2:
    """Outer jets of every entry of eval_jet, giving access to grad(Lap u) and Lap(Lap u)."""
    x = as_batch(x, params.input_dim).detach().clone().requires_grad_(True)
    inner = eval_jet(params, x)
    D = x.shape[1]
    value = jet_of(inner.value, x)
    gradient = [jet_of(inner.gradient[:, a], x) for a in range(D)]
    hessian = [[jet_of(inner.hessian[:, a, b], x) for b in range(D)] for a in range(D)]
    return NestedJet2(value, gradient, hessian)
