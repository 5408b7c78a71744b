import math

import pytest
import torch

from src.operators.ansatz import AnsatzNet, Embedding, Multiplier
from src.operators.domain import OperatorSpec
from src.training.sampling import sample_domain


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long training tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


class ScalarCore:
    """Stand-in core u(h) = f(h_0) with closed-form f, f', f''."""

    input_dim = 1

    def f(self, h):
        raise NotImplementedError

    def propagate(self, h, J, H):
        f, df, d2f = self.f(h[:, :1])
        J0 = J[:, :1]
        H_out = d2f[..., None, None] * (J0.unsqueeze(-1) * J0.unsqueeze(-2)) + df[..., None, None] * H[:, :1]
        return f, df[..., None] * J0, H_out


class SineCore(ScalarCore):
    """sin(pi h), the first Dirichlet eigenfunction on [0, 1] up to scale."""

    def f(self, h):
        s = torch.sin(math.pi * h)
        return s, math.pi * torch.cos(math.pi * h), -(math.pi**2) * s


class GaussianCore(ScalarCore):
    """pi^(-1/4) exp(-h^2/2), the oscillator ground state in 1D."""

    def f(self, h):
        g = math.pi ** (-0.25) * torch.exp(-0.5 * h * h)
        return g, -h * g, (h * h - 1.0) * g


class OneCore(ScalarCore):
    def f(self, h):
        one = torch.ones_like(h)
        return one, torch.zeros_like(h), torch.zeros_like(h)


@pytest.fixture
def harmonic_1d():
    return OperatorSpec.harmonic(1)


@pytest.fixture
def sine_net(harmonic_1d):
    return AnsatzNet(SineCore(), harmonic_1d.domain, Embedding.IDENTITY, Multiplier.NONE)


@pytest.fixture
def gaussian_net():
    op = OperatorSpec.oscillator(1)
    return AnsatzNet(GaussianCore(), op.domain, Embedding.IDENTITY, Multiplier.NONE)


@pytest.fixture
def bubble_one_net(harmonic_1d):
    return AnsatzNet(OneCore(), harmonic_1d.domain, Embedding.IDENTITY, Multiplier.BUBBLE)


@pytest.fixture
def small_samples(harmonic_1d):
    return sample_domain(harmonic_1d.domain, 200, seed=3)
