"""
Application of the three differential operators to jets.

    harmonic:       L v = -Lap v
    oscillator:     L v = -1/2 Lap v + V v,            V = 1/2 |x|^2
    fokker_planck:  L v = -Lap v - grad V . grad v - (Lap V) v,   V = sin(sum_i c_i cos x_i)
"""
import logging
from typing import Tuple

import torch

from src.errors import DimensionMismatchError
from src.engine.jets import Jet2, as_batch, jet_of
from src.operators.ansatz import AnsatzNet, ansatz_jet
from src.operators.domain import OperatorKind, OperatorSpec

logger = logging.getLogger(__name__)


def potential_jet(op: OperatorSpec, x: torch.Tensor) -> Jet2:
    """Closed-form value, gradient and Hessian of the operator's potential."""
    x = as_batch(x, op.dim)
    N, D = x.shape
    if op.kind is OperatorKind.HARMONIC:
        return Jet2(torch.zeros(N, dtype=x.dtype), torch.zeros_like(x), torch.zeros(N, D, D, dtype=x.dtype))
    if op.kind is OperatorKind.OSCILLATOR:
        eye = torch.eye(D, dtype=x.dtype).expand(N, D, D)
        return Jet2(0.5 * (x * x).sum(-1), x, eye)

    c = torch.tensor(op.fp_coeffs, dtype=x.dtype)
    s = (c * torch.cos(x)).sum(-1)
    ds = -c * torch.sin(x)
    sin_s, cos_s = torch.sin(s), torch.cos(s)
    grad = cos_s[:, None] * ds
    hess = -sin_s[:, None, None] * ds.unsqueeze(-1) * ds.unsqueeze(-2)
    hess = hess + torch.diag_embed(-cos_s[:, None] * c * torch.cos(x))
    return Jet2(sin_s, grad, hess)


def apply_operator(op: OperatorSpec, jet: Jet2, x: torch.Tensor) -> torch.Tensor:
    """Pointwise L v from the jet of v computed at the same points."""
    x = as_batch(x)
    if jet.dim != op.dim or x.shape[1] != op.dim or jet.value.shape[0] != x.shape[0]:
        raise DimensionMismatchError(
            f"Jet ({jet.value.shape[0]} points, dim {jet.dim}) and points {tuple(x.shape)} do not match operator dim {op.dim}."
        )
    lap = jet.laplacian()
    if op.kind is OperatorKind.HARMONIC:
        return -lap
    V = potential_jet(op, x)
    if op.kind is OperatorKind.OSCILLATOR:
        return -0.5 * lap + V.value * jet.value
    return -lap - (V.gradient * jet.gradient).sum(-1) - V.laplacian() * jet.value


def operator_chain(op: OperatorSpec, net: AnsatzNet, x: torch.Tensor) -> Tuple[Jet2, Jet2]:
    """Jet of v and jet of L v; the second is differentiated by autograd."""
    x = as_batch(x, op.dim).detach().clone().requires_grad_(True)
    jet = ansatz_jet(net, x)
    Lv = apply_operator(op, jet, x)
    return jet, jet_of(Lv, x)


def apply_operator_nested(op: OperatorSpec, net: AnsatzNet, x: torch.Tensor) -> Jet2:
    """Jet2 of the function L v, ready for a second apply_operator."""
    return operator_chain(op, net, x)[1]
