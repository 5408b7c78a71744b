"""
Boundary-aware wrapper around a core network.

v(x) = B(x) * u(E(x)) where B is the Dirichlet bubble prod_k (x_k - a_k)(b_k - x_k)
or 1, and E is the identity or the trig embedding (sin x_1, cos x_1, ...).
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import torch

from src.errors import InvalidArchitectureError
from src.engine.jets import Jet2, as_batch, check_finite_inputs, symmetrize
from src.engine.network import init_network, validate_layer_sizes
from src.operators.domain import Boundary, DomainSpec, OperatorSpec

logger = logging.getLogger(__name__)


class Embedding(str, Enum):
    IDENTITY = "identity"
    TRIG = "trig-features"


class Multiplier(str, Enum):
    NONE = "none"
    BUBBLE = "dirichlet-bubble"


@dataclass
class AnsatzNet:
    """
    A core network plus how its output is embedded into the domain.

    `core` is anything exposing `input_dim` and `propagate(h, J, H)` with the
    semantics of NetworkParams.propagate.
    """

    core: object
    domain: DomainSpec
    embedding: Embedding = Embedding.IDENTITY
    multiplier: Multiplier = Multiplier.NONE

    @property
    def embedded_width(self) -> int:
        return 2 * self.domain.dim if self.embedding is Embedding.TRIG else self.domain.dim


def _embed(embedding: Embedding, x: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    N, D = x.shape
    if embedding is Embedding.IDENTITY:
        return x, torch.eye(D, dtype=x.dtype).expand(N, D, D), torch.zeros(N, D, D, D, dtype=x.dtype)

    s, c = torch.sin(x), torch.cos(x)
    E = torch.stack([s, c], dim=-1).reshape(N, 2 * D)
    J = torch.zeros(N, 2 * D, D, dtype=x.dtype)
    H = torch.zeros(N, 2 * D, D, D, dtype=x.dtype)
    axes = torch.arange(D)
    J[:, 2 * axes, axes] = c
    J[:, 2 * axes + 1, axes] = -s
    H[:, 2 * axes, axes, axes] = -s
    H[:, 2 * axes + 1, axes, axes] = -c
    return E, J, H


def _bubble_jet(domain: DomainSpec, x: torch.Tensor) -> Jet2:
    """Jet of prod_k f_k with f_k = (x_k - a_k)(b_k - x_k), built without divisions."""
    a, b = domain.lower, domain.upper
    f = (x - a) * (b - x)
    df = a + b - 2.0 * x
    N, D = x.shape

    def prod_without(*skip: int) -> torch.Tensor:
        keep = [k for k in range(D) if k not in skip]
        if not keep:
            return torch.ones(N, dtype=x.dtype)
        return torch.prod(f[:, keep], dim=-1)

    value = prod_without()
    grad = torch.stack([df[:, k] * prod_without(k) for k in range(D)], dim=-1)
    H = torch.zeros(N, D, D, dtype=x.dtype)
    for k in range(D):
        H[:, k, k] = -2.0 * prod_without(k)
        for l in range(k + 1, D):
            H[:, k, l] = df[:, k] * df[:, l] * prod_without(k, l)
    return Jet2(value, grad, symmetrize(H))


def ansatz_jet(net: AnsatzNet, x: torch.Tensor) -> Jet2:
    """Exact jet of v = B * u(E(x)) via the chain and product rules."""
    x = as_batch(x, net.domain.dim)
    width = getattr(net.core, "input_dim", None)
    if width != net.embedded_width:
        raise InvalidArchitectureError(
            f"Core input width {width} does not match the {net.embedding.value} embedding width {net.embedded_width}."
        )
    core_params = net.core if hasattr(net.core, "parameters") else None
    check_finite_inputs(core_params, x)

    E, JE, HE = _embed(net.embedding, x)
    u, Ju, Hu = net.core.propagate(E, JE, HE)
    core = Jet2(u[:, 0], Ju[:, 0], Hu[:, 0])
    if net.multiplier is Multiplier.NONE:
        return Jet2(core.value, core.gradient, symmetrize(core.hessian))

    B = _bubble_jet(net.domain, x)
    value = B.value * core.value
    grad = core.value[:, None] * B.gradient + B.value[:, None] * core.gradient
    cross = B.gradient.unsqueeze(-1) * core.gradient.unsqueeze(-2)
    hess = core.value[:, None, None] * B.hessian + cross + cross.transpose(-1, -2) + B.value[:, None, None] * core.hessian
    return Jet2(value, grad, symmetrize(hess))


def ansatz_values(net: AnsatzNet, x: torch.Tensor) -> torch.Tensor:
    return ansatz_jet(net, x).value


def build_ansatz(op: OperatorSpec, arch: Sequence[int], activation: str = "tanh", seed: int = 0) -> AnsatzNet:
    """Pick the boundary treatment for the operator and initialize its core network."""
    if op.domain.boundary is Boundary.PERIODIC:
        embedding, multiplier = Embedding.TRIG, Multiplier.NONE
    else:
        embedding, multiplier = Embedding.IDENTITY, Multiplier.BUBBLE
    validate_layer_sizes(arch)
    net = AnsatzNet(None, op.domain, embedding, multiplier)
    if arch[0] != net.embedded_width:
        raise InvalidArchitectureError(
            f"Architecture input width {arch[0]} does not match {net.embedding.value} width {net.embedded_width}."
        )
    net.core = init_network(arch, activation, seed)
    return net
