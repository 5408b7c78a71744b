"""
Parameter gradients of scalar losses built from jets.
"""
import logging
from typing import Callable, Tuple

import torch
import torch.nn as nn
from torch.nn.utils import parameters_to_vector, vector_to_parameters

from src.errors import NumericDomainError

logger = logging.getLogger(__name__)


def flat_parameters(net: nn.Module) -> torch.Tensor:
    return parameters_to_vector(net.parameters()).detach().clone()


def assign_flat_parameters(net: nn.Module, flat: torch.Tensor) -> None:
    with torch.no_grad():
        vector_to_parameters(flat, net.parameters())


def loss_param_grad(loss_closure: Callable[[], torch.Tensor], params: nn.Module) -> Tuple[float, torch.Tensor]:
    """
    Evaluate the loss and its exact gradient w.r.t. every parameter of `params`.

    The closure returns either a scalar or the per-sample terms whose mean is the
    loss; per-sample terms let a non-finite loss be traced to its sample.
    """
    terms = loss_closure()
    if terms.dim() == 0:
        if not torch.isfinite(terms):
            raise NumericDomainError(f"Loss is not finite: {terms.item()}")
        loss = terms
    else:
        bad = (~torch.isfinite(terms)).nonzero()
        if bad.numel():
            index = int(bad[0, 0])
            raise NumericDomainError(f"Loss term is not finite: {terms[index].item()}", sample_index=index)
        loss = terms.mean()

    parameters = list(params.parameters())
    if loss.requires_grad:
        grads = torch.autograd.grad(loss, parameters, allow_unused=True)
    else:
        grads = [None] * len(parameters)
    flat = torch.cat(
        [torch.zeros_like(p).reshape(-1) if g is None else g.reshape(-1) for p, g in zip(parameters, grads)]
    )
    return float(loss.detach()), flat.detach()
