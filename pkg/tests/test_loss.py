import math

import pytest
import torch

from src.engine.network import init_network
from src.errors import DegenerateDirectionError
from src.operators.ansatz import build_ansatz
from src.operators.domain import OperatorSpec
from src.training.loss import (
    normalized_loss_terms,
    rayleigh_from_values,
    rayleigh_quotient,
    stnet_loss,
)
from src.training.sampling import sample_domain
from src.transforms.function_level import TransformState, discrete_norm


def test_previous_iterate_equal_to_normalized_field_gives_zero_loss():
    w = torch.rand(64, dtype=torch.float64) + 0.1
    prev = w / discrete_norm(w)
    assert normalized_loss_terms(w, prev).mean().item() < 1e-28


def test_loss_is_sign_aligned():
    w = torch.rand(64, dtype=torch.float64) + 0.1
    prev = -w / discrete_norm(w)
    assert normalized_loss_terms(w, prev).mean().item() < 1e-28


def test_vanishing_field_is_degenerate():
    with pytest.raises(DegenerateDirectionError) as info:
        normalized_loss_terms(torch.zeros(10, dtype=torch.float64), torch.ones(10, dtype=torch.float64), target=2)
    assert info.value.target == 2


def test_gradient_step_on_matrix_stub_decreases_loss():
    A = torch.tensor([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]], dtype=torch.float64)
    p = torch.tensor([1.0, -0.5, 0.25], dtype=torch.float64, requires_grad=True)
    prev = (p.detach() / discrete_norm(p.detach())).clone()

    def loss_of(q):
        return normalized_loss_terms(A @ q, prev).mean()

    loss = loss_of(p)
    (grad,) = torch.autograd.grad(loss, p)
    with torch.no_grad():
        assert loss_of(p - 1e-3 * grad).item() < loss.item()


def test_exact_eigenfunction_is_fixed_point_without_filter(sine_net, harmonic_1d, small_samples):
    state = TransformState(filter_on=False)
    v = torch.sin(math.pi * small_samples.points[:, 0])
    prev = v / discrete_norm(v)
    evaluation = stnet_loss(0, sine_net, prev, state, harmonic_1d, small_samples)
    assert evaluation.value < 1e-10


def test_exact_eigenfunction_is_fixed_point_with_filter_and_shift(sine_net, harmonic_1d, small_samples):
    # full mode, shift away from pi^2: p acts on sin(pi x) as the scalar (pi^2 - 5)^2 - 0.01
    state = TransformState(xi=0.1, lambda_hat=5.0)
    v = torch.sin(math.pi * small_samples.points[:, 0])
    prev = v / discrete_norm(v)
    evaluation = stnet_loss(0, sine_net, prev, state, harmonic_1d, small_samples)
    assert evaluation.value < 1e-8
    scale = (math.pi**2 - 5.0) ** 2 - 0.01
    assert torch.allclose(evaluation.w.detach(), scale * v, rtol=0, atol=1e-8)
    assert rayleigh_from_values(evaluation.v.detach(), evaluation.Lv.detach()) == pytest.approx(math.pi**2, rel=1e-10)


def test_deflated_eigenfunction_is_fixed_point_in_full_mode(sine_net, harmonic_1d, small_samples):
    state = TransformState(xi=0.1, lambda_hat=5.0)
    state.install_snapshot(math.pi**2, sine_net, harmonic_1d, small_samples)
    v = torch.sin(math.pi * small_samples.points[:, 0])
    evaluation = stnet_loss(1, sine_net, v / discrete_norm(v), state, harmonic_1d, small_samples)
    assert evaluation.value < 1e-8


def test_stnet_loss_gradient_reaches_parameters():
    op = OperatorSpec.harmonic(1)
    net = build_ansatz(op, [1, 8, 8, 1], seed=1)
    samples = sample_domain(op.domain, 64, seed=0)
    prev = torch.ones(64, dtype=torch.float64)
    evaluation = stnet_loss(0, net, prev, TransformState(lambda_hat=5.0), op, samples)
    evaluation.terms.mean().backward()
    assert all(p.grad is not None for p in net.core.parameters())


class TestRayleigh:
    def test_sine_stub(self, sine_net, harmonic_1d):
        samples = sample_domain(harmonic_1d.domain, 100000, seed=0)
        assert rayleigh_quotient(sine_net, harmonic_1d, samples) == pytest.approx(math.pi**2, rel=5e-3)

    def test_oscillator_ground_state_stub(self, gaussian_net):
        op = OperatorSpec.oscillator(1)
        samples = sample_domain(op.domain, 20000, seed=0)
        assert rayleigh_quotient(gaussian_net, op, samples) == pytest.approx(0.5, abs=1e-3)

    def test_scaling_invariance(self):
        v = torch.rand(100, dtype=torch.float64)
        Lv = torch.rand(100, dtype=torch.float64)
        base = rayleigh_from_values(v, Lv)
        assert rayleigh_from_values(3.7 * v, 3.7 * Lv) == pytest.approx(base, rel=1e-12)

    def test_vanishing_field(self):
        with pytest.raises(DegenerateDirectionError):
            rayleigh_from_values(torch.zeros(5, dtype=torch.float64), torch.zeros(5, dtype=torch.float64))
