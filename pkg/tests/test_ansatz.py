import math

import pytest
import torch

from src.engine.network import init_network
from src.errors import InvalidArchitectureError
from src.operators.ansatz import AnsatzNet, Embedding, Multiplier, ansatz_jet, ansatz_values, build_ansatz
from src.operators.domain import OperatorSpec
from src.training.sampling import boundary_points


def test_bubble_vanishes_at_dirichlet_boundary(harmonic_1d):
    net = build_ansatz(harmonic_1d, [1, 20, 20, 1], seed=3)
    x = torch.tensor([[0.0], [1.0]], dtype=torch.float64)
    assert torch.count_nonzero(ansatz_values(net, x)) == 0


def test_bubble_vanishes_on_every_face_in_2d():
    op = OperatorSpec.harmonic(2)
    net = build_ansatz(op, [2, 10, 10, 1], seed=1)
    x = boundary_points(op.domain, 25, seed=0)
    assert x.shape == (100, 2)
    assert torch.count_nonzero(ansatz_values(net, x)) == 0


def test_bubble_laplacian_with_unit_core(bubble_one_net):
    jet = ansatz_jet(bubble_one_net, torch.tensor([[0.5]], dtype=torch.float64))
    assert jet.value.item() == pytest.approx(0.25)
    assert jet.laplacian().item() == pytest.approx(-2.0, abs=1e-15)


def test_bubble_jet_matches_finite_differences_in_2d():
    op = OperatorSpec.harmonic(2)
    net = build_ansatz(op, [2, 8, 8, 1], seed=5)
    x = torch.rand(30, 2, generator=torch.Generator().manual_seed(2), dtype=torch.float64) * 0.8 + 0.1
    jet = ansatz_jet(net, x)
    h = 1e-5
    fd = torch.empty_like(jet.hessian)
    for a in range(2):
        e = torch.zeros(2, dtype=torch.float64)
        e[a] = h
        fd[:, :, a] = (ansatz_jet(net, x + e).gradient - ansatz_jet(net, x - e).gradient) / (2 * h)
    assert torch.linalg.norm(fd - jet.hessian) / torch.linalg.norm(jet.hessian) < 1e-6


def test_trig_features_are_periodic():
    op = OperatorSpec.fokker_planck([0.5, 0.5])
    net = build_ansatz(op, [4, 10, 10, 1], seed=2)
    x = torch.rand(20, 2, dtype=torch.float64) * 2 * math.pi
    base = ansatz_values(net, x)
    for k in range(2):
        shifted = x.clone()
        shifted[:, k] += 2 * math.pi
        assert torch.allclose(ansatz_values(net, shifted), base, rtol=0, atol=1e-12)


def test_trig_jet_matches_finite_differences():
    op = OperatorSpec.fokker_planck([0.5])
    net = build_ansatz(op, [2, 10, 1], seed=8)
    x = torch.rand(15, 1, dtype=torch.float64) * 2 * math.pi
    jet = ansatz_jet(net, x)
    h = 1e-5
    fd = (ansatz_jet(net, x + h).gradient - ansatz_jet(net, x - h).gradient) / (2 * h)
    assert torch.allclose(fd, jet.hessian[:, :, 0], atol=1e-8)


def test_build_ansatz_picks_boundary_treatment():
    assert build_ansatz(OperatorSpec.fokker_planck([0.5]), [2, 4, 1]).embedding is Embedding.TRIG
    oscillator = build_ansatz(OperatorSpec.oscillator(1), [1, 4, 1])
    assert oscillator.embedding is Embedding.IDENTITY
    assert oscillator.multiplier is Multiplier.BUBBLE


def test_build_ansatz_rejects_wrong_input_width():
    with pytest.raises(InvalidArchitectureError):
        build_ansatz(OperatorSpec.fokker_planck([0.5]), [1, 4, 1])


def test_core_width_checked_at_evaluation(harmonic_1d):
    net = AnsatzNet(init_network([2, 4, 1]), harmonic_1d.domain)
    with pytest.raises(InvalidArchitectureError):
        ansatz_jet(net, torch.rand(3, 1, dtype=torch.float64))
