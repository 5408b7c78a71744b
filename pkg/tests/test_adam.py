import pytest
import torch

from src.errors import NumericDomainError
from src.training.adam import AdamState, adam_step


def test_zero_gradient_leaves_parameters_unchanged():
    p = torch.tensor([1.0, -2.0, 3.0], dtype=torch.float64)
    state = AdamState.zeros_like(p)
    assert torch.equal(adam_step(p, torch.zeros_like(p), state, 1e-3), p)
    assert state.t == 1


def test_constant_gradient_steps_by_learning_rate_times_sign():
    p = torch.zeros(3, dtype=torch.float64)
    g = torch.tensor([0.5, -3.0, 20.0], dtype=torch.float64)
    state = AdamState.zeros_like(p)
    eta = 1e-3
    for _ in range(50):
        new = adam_step(p, g, state, eta)
        step, p = new - p, new
    assert torch.allclose(step, -eta * torch.sign(g), rtol=1e-6)


def test_quadratic_bowl_converges():
    p = torch.tensor([0.6, -0.8], dtype=torch.float64)
    state = AdamState.zeros_like(p)
    for _ in range(2000):
        p = adam_step(p, p.clone(), state, 1e-2)
    assert torch.linalg.norm(p).item() < 1e-3


def test_non_finite_gradient_is_rejected():
    p = torch.zeros(2, dtype=torch.float64)
    state = AdamState.zeros_like(p)
    with pytest.raises(NumericDomainError) as info:
        adam_step(p, torch.tensor([1.0, float("nan")], dtype=torch.float64), state, 1e-3)
    assert info.value.iteration == 1


def test_shape_mismatch_is_rejected():
    p = torch.zeros(2, dtype=torch.float64)
    with pytest.raises(ValueError):
        adam_step(p, torch.zeros(3, dtype=torch.float64), AdamState.zeros_like(p), 1e-3)
