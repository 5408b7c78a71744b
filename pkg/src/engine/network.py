"""
Multilayer perceptron representing one candidate eigenfunction.

Besides the plain forward pass the network can push a (value, Jacobian, Hessian)
bundle through its layers using closed-form activation derivatives, which is how
input derivatives are obtained without finite differences.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import torch
import torch.nn as nn

from src.errors import InvalidArchitectureError

logger = logging.getLogger(__name__)

ACTIVATIONS = ("tanh", "sin")

Bundle = Tuple[torch.Tensor, torch.Tensor, torch.Tensor]


def _activation_derivatives(tag: str, z: torch.Tensor) -> Bundle:
    """Return sigma(z), sigma'(z), sigma''(z) for the activation tag."""
    if tag == "tanh":
        t = torch.tanh(z)
        dt = 1.0 - t * t
        return t, dt, -2.0 * t * dt
    if tag == "sin":
        s = torch.sin(z)
        return s, torch.cos(z), -s
    raise InvalidArchitectureError(f"Unknown activation '{tag}'. Expected one of {ACTIVATIONS}.")


class NetworkParams(nn.Module):
    """Dense float64 MLP u_theta with a smooth activation between hidden layers."""

    def __init__(self, layer_sizes: Sequence[int], activation: str = "tanh") -> None:
        super().__init__()
        validate_layer_sizes(layer_sizes)
        if activation not in ACTIVATIONS:
            raise InvalidArchitectureError(f"Unknown activation '{activation}'. Expected one of {ACTIVATIONS}.")
        self.layer_sizes: List[int] = [int(n) for n in layer_sizes]
        self.activation = activation
        self.layers = nn.ModuleList(
            nn.Linear(n_in, n_out, dtype=torch.float64)
            for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:])
        )

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = x
        last = len(self.layers) - 1
        for index, layer in enumerate(self.layers):
            h = layer(h)
            if index < last:
                h = _activation_derivatives(self.activation, h)[0]
        return h.squeeze(-1)

    def propagate(self, h: torch.Tensor, J: torch.Tensor, H: torch.Tensor) -> Bundle:
        """
        Push a derivative bundle through the network.

        Args:
            h: (N, n_in) input values.
            J: (N, n_in, D) Jacobian of the inputs w.r.t. the D coordinates.
            H: (N, n_in, D, D) Hessian of the inputs.

        Returns:
            Output value (N, 1), Jacobian (N, 1, D) and Hessian (N, 1, D, D).
        """
        last = len(self.layers) - 1
        for index, layer in enumerate(self.layers):
            W, b = layer.weight, layer.bias
            h = h @ W.T + b
            J = torch.einsum("oi,nid->nod", W, J)
            H = torch.einsum("oi,nide->node", W, H)
            if index < last:
                s, ds, d2s = _activation_derivatives(self.activation, h)
                outer = J.unsqueeze(-1) * J.unsqueeze(-2)
                H = d2s[..., None, None] * outer + ds[..., None, None] * H
                J = ds[..., None] * J
                h = s
        return h, J, H


def validate_layer_sizes(layer_sizes: Sequence[int]) -> None:
    if not layer_sizes or len(layer_sizes) < 2:
        raise InvalidArchitectureError(f"Layer list needs at least an input and an output size, got {list(layer_sizes)}.")
    if any(int(n) <= 0 for n in layer_sizes):
        raise InvalidArchitectureError(f"Layer sizes must be positive, got {list(layer_sizes)}.")
    if int(layer_sizes[-1]) != 1:
        raise InvalidArchitectureError(f"Output layer must have width 1, got {layer_sizes[-1]}.")


def init_network(layer_sizes: Sequence[int], activation: str = "tanh", seed: int = 0) -> NetworkParams:
    """Xavier-uniform weights and zero biases, deterministic for a fixed seed."""
    net = NetworkParams(layer_sizes, activation)
    generator = torch.Generator().manual_seed(int(seed) % (2**64))
    with torch.no_grad():
        for layer in net.layers:
            n_out, n_in = layer.weight.shape
            bound = math.sqrt(6.0 / (n_in + n_out))
            layer.weight.uniform_(-bound, bound, generator=generator)
            layer.bias.zero_()
    logger.debug(f"Initialized network {net.layer_sizes} ({net.parameter_count} parameters, seed={seed}).")
    return net


def has_finite_parameters(net: Optional[nn.Module]) -> bool:
    if net is None:
        return True
    return all(bool(torch.isfinite(p).all()) for p in net.parameters())
