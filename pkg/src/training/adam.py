"""
Bias-corrected Adam on a flat parameter vector.
"""
from dataclasses import dataclass
from typing import Optional

import torch

from src.errors import NumericDomainError

BETA1 = 0.9
BETA2 = 0.999
EPS_ADAM = 1e-8


@dataclass
class AdamState:
    m: torch.Tensor
    v: torch.Tensor
    t: int = 0

    @classmethod
    def zeros_like(cls, params: torch.Tensor) -> "AdamState":
        return cls(torch.zeros_like(params), torch.zeros_like(params))


def adam_step(
    params: torch.Tensor,
    grads: torch.Tensor,
    moment_state: AdamState,
    eta: float,
    t: Optional[int] = None,
    beta1: float = BETA1,
    beta2: float = BETA2,
    eps: float = EPS_ADAM,
) -> torch.Tensor:
    """Return updated parameters; the moments in `moment_state` are updated in place."""
    t = moment_state.t + 1 if t is None else t
    if t < 1:
        raise ValueError(f"Adam step counter starts at 1, got {t}.")
    if params.shape != grads.shape:
        raise ValueError(f"Parameter shape {tuple(params.shape)} and gradient shape {tuple(grads.shape)} differ.")
    if not bool(torch.isfinite(grads).all()):
        raise NumericDomainError("Gradient is not finite.", iteration=t)

    moment_state.m = beta1 * moment_state.m + (1.0 - beta1) * grads
    moment_state.v = beta2 * moment_state.v + (1.0 - beta2) * grads * grads
    moment_state.t = t
    m_hat = moment_state.m / (1.0 - beta1**t)
    v_hat = moment_state.v / (1.0 - beta2**t)
    return params - eta * m_hat / (torch.sqrt(v_hat) + eps)
