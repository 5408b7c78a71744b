"""
Finite-difference checks of the derivative engine.
"""
import logging
from typing import List

import torch

from src.checks.results import PropertyResult
from src.engine.gradients import assign_flat_parameters, flat_parameters, loss_param_grad
from src.engine.jets import eval_jet, eval_nested_jet
from src.engine.network import init_network
from src.operators.ansatz import AnsatzNet, Embedding, Multiplier, ansatz_values
from src.operators.domain import OperatorSpec
from src.training.loss import stnet_loss
from src.training.sampling import sample_domain
from src.transforms.function_level import TransformState, discrete_norm

logger = logging.getLogger(__name__)

RANDOM_NETS = ((1, 41), (2, 42), (3, 43))


def _relative(approx: torch.Tensor, exact: torch.Tensor) -> float:
    scale = float(torch.linalg.norm(exact))
    return float(torch.linalg.norm(approx - exact)) / (scale if scale > 0 else 1.0)


def _points(dim: int, count: int, seed: int) -> torch.Tensor:
    g = torch.Generator().manual_seed(seed)
    return 2.0 * torch.rand(count, dim, generator=g, dtype=torch.float64) - 1.0


class DerivativeChecks:
    """Gradient, Hessian, biharmonic and parameter-gradient checks against central differences."""

    def __init__(self, points: int = 100, arch_width: int = 20) -> None:
        self.points = points
        self.arch_width = arch_width

    def gradient_and_hessian(self) -> List[PropertyResult]:
        worst_grad = worst_hess = worst_sym = 0.0
        h = 1e-4
        for dim, seed in RANDOM_NETS:
            net = init_network([dim] + [self.arch_width] * 4 + [1], seed=seed)
            x = _points(dim, self.points, seed + 100)
            jet = eval_jet(net, x)
            fd_grad = torch.empty_like(jet.gradient)
            fd_hess = torch.empty_like(jet.hessian)
            with torch.no_grad():
                for a in range(dim):
                    step = torch.zeros(dim, dtype=x.dtype)
                    step[a] = h
                    fd_grad[:, a] = (net(x + step) - net(x - step)) / (2 * h)
                    fd_hess[:, :, a] = (eval_jet(net, x + step).gradient - eval_jet(net, x - step).gradient) / (2 * h)
            worst_grad = max(worst_grad, _relative(fd_grad, jet.gradient))
            worst_hess = max(worst_hess, _relative(fd_hess, jet.hessian))
            worst_sym = max(worst_sym, float((jet.hessian - jet.hessian.transpose(-1, -2)).abs().max()))
        return [
            PropertyResult.measure("jet_gradient_fd", worst_grad, 1e-6),
            PropertyResult.measure("jet_hessian_fd", worst_hess, 1e-5),
            PropertyResult.measure("jet_hessian_symmetry", worst_sym, 0.0),
        ]

    def biharmonic(self) -> List[PropertyResult]:
        worst = worst_collapse = 0.0
        h = 1e-3
        for arch, seed in (([1, 10, 10, 1], 7), ([2, 10, 10, 1], 8)):
            net = init_network(arch, seed=seed)
            dim = arch[0]
            x = _points(dim, self.points, seed + 100)
            nested = eval_nested_jet(net, x)
            exact = nested.biharmonic().detach()
            inner = nested.collapse()
            plain = eval_jet(net, x)
            worst_collapse = max(
                worst_collapse,
                float((inner.value - plain.value).abs().max()),
                float((inner.gradient - plain.gradient).abs().max()),
                float((inner.hessian - plain.hessian).abs().max()),
            )

            def lap(points: torch.Tensor) -> torch.Tensor:
                return eval_jet(net, points).laplacian()

            fd = torch.zeros_like(exact)
            with torch.no_grad():
                for b in range(dim):
                    e = torch.zeros(dim, dtype=x.dtype)
                    e[b] = h
                    fd += (-lap(x + 2 * e) + 16 * lap(x + e) - 30 * lap(x) + 16 * lap(x - e) - lap(x - 2 * e)) / (12 * h * h)
            worst = max(worst, _relative(fd, exact))
        return [
            PropertyResult.measure("nested_biharmonic_fd", worst, 1e-4),
            PropertyResult.measure("nested_collapse", worst_collapse, 0.0),
        ]

    def parameter_gradient(self, coordinates: int = 20) -> List[PropertyResult]:
        op = OperatorSpec.harmonic(1)
        net = AnsatzNet(init_network([1, 10, 10, 1], seed=3), op.domain, Embedding.IDENTITY, Multiplier.BUBBLE)
        other = AnsatzNet(init_network([1, 10, 10, 1], seed=4), op.domain, Embedding.IDENTITY, Multiplier.BUBBLE)
        samples = sample_domain(op.domain, 50, seed=5)
        with torch.no_grad():
            prev = ansatz_values(other, samples.points)
            prev = prev / discrete_norm(prev)
        state = TransformState(xi=0.1, lambda_hat=5.0)

        def closure() -> torch.Tensor:
            return stnet_loss(0, net, prev, state, op, samples).terms

        _, grad = loss_param_grad(closure, net.core)
        base = flat_parameters(net.core)
        g = torch.Generator().manual_seed(11)
        picked = torch.randperm(base.numel(), generator=g)[:coordinates]
        h = 1e-6
        fd = torch.empty(len(picked), dtype=base.dtype)
        for j, index in enumerate(picked.tolist()):
            values = []
            for sign in (1.0, -1.0):
                shifted = base.clone()
                shifted[index] += sign * h
                assign_flat_parameters(net.core, shifted)
                values.append(float(closure().detach().mean()))
            fd[j] = (values[0] - values[1]) / (2 * h)
        assign_flat_parameters(net.core, base)
        return [PropertyResult.measure("loss_param_grad_fd", _relative(fd, grad[picked]), 1e-5)]

    def run(self) -> List[PropertyResult]:
        return self.gradient_and_hessian() + self.biharmonic() + self.parameter_gradient()
