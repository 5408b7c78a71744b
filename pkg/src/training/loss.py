"""
Power-iteration style loss and the Rayleigh quotient over a sample set.

The loss compares the previous (normalized, detached) iterate with the
normalized transformed field u = w / ||w||_N:

    loss = mean_j (prev_j - u_j)^2
"""
import logging
from dataclasses import dataclass

import torch

from src.errors import DegenerateDirectionError
from src.operators.ansatz import AnsatzNet, ansatz_jet
from src.operators.differential import apply_operator
from src.operators.domain import OperatorSpec
from src.transforms.function_level import TransformState, discrete_inner, discrete_norm, transform_values

logger = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-14


@dataclass
class LossEvaluation:
    terms: torch.Tensor
    v: torch.Tensor
    Lv: torch.Tensor
    w: torch.Tensor

    @property
    def value(self) -> float:
        return float(self.terms.detach().mean())


def normalized_loss_terms(w: torch.Tensor, prev: torch.Tensor, target: int = 0) -> torch.Tensor:
    """Per-sample (prev - u)^2 with u = w / ||w||_N sign-aligned against prev."""
    norm = discrete_norm(w)
    if float(norm.detach()) < DEGENERATE_NORM:
        raise DegenerateDirectionError(f"Transformed field of target {target} vanished (norm {float(norm):.3e}).", target=target)
    u = w / norm
    sign = 1.0 if float(discrete_inner(u.detach(), prev)) >= 0.0 else -1.0
    return (prev - sign * u) ** 2


def stnet_loss(
    i: int, net: AnsatzNet, prev_vals: torch.Tensor, state: TransformState, op: OperatorSpec, samples
) -> LossEvaluation:
    """Loss of target i; gradients flow only through the parameters of `net`."""
    v, Lv, w = transform_values(state, op, net, samples)
    terms = normalized_loss_terms(w, prev_vals.detach(), target=i)
    return LossEvaluation(terms, v, Lv, w)


def rayleigh_from_values(v: torch.Tensor, Lv: torch.Tensor) -> float:
    vv = float(discrete_inner(v, v))
    if vv <= DEGENERATE_NORM:
        raise DegenerateDirectionError(f"Rayleigh quotient of a vanishing field (<v,v> = {vv:.3e}).")
    return float(discrete_inner(v, Lv)) / vv


def rayleigh_quotient(net: AnsatzNet, op: OperatorSpec, samples) -> float:
    """<v, Lv>_N / <v, v>_N over the sample set."""
    with torch.no_grad():
        jet = ansatz_jet(net, samples.points)
        Lv = apply_operator(op, jet, samples.points)
    return rayleigh_from_values(jet.value, Lv)
