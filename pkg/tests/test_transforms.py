import math

import numpy as np
import pytest
import torch

from src.baselines.dense import DenseMatrix, jacobi_eigs
from src.errors import (
    DimensionMismatchError,
    InvalidInputError,
    InvariantViolationError,
    UnsupportedDegreeError,
)
from src.transforms.function_level import (
    TransformState,
    deflate_values,
    discrete_inner,
    discrete_norm,
    filter_apply,
    filtered_values,
    project_out,
    transform_values,
)
from src.training.sampling import sample_domain


class TestDiscreteInner:
    def test_constant_fields(self):
        ones = torch.ones(17, dtype=torch.float64)
        assert discrete_inner(ones, ones).item() == 1.0

    def test_orthogonal_sines(self, harmonic_1d):
        x = sample_domain(harmonic_1d.domain, 100000, seed=0).points[:, 0]
        value = discrete_inner(torch.sin(math.pi * x), torch.sin(2 * math.pi * x))
        assert abs(value.item()) < 5e-3

    def test_normalized_sine(self, harmonic_1d):
        x = sample_domain(harmonic_1d.domain, 100000, seed=1).points[:, 0]
        u = math.sqrt(2.0) * torch.sin(math.pi * x)
        assert discrete_inner(u, u).item() == pytest.approx(1.0, abs=5e-3)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            discrete_inner(torch.ones(3), torch.ones(4))


def _unit(values):
    return values / discrete_norm(values)


class TestDeflation:
    def test_empty_solved_list_returns_operator_values(self):
        state = TransformState()
        v, Lv = torch.rand(10, dtype=torch.float64), torch.rand(10, dtype=torch.float64)
        assert torch.equal(deflate_values(state, v, Lv, []), Lv)

    def test_orthogonal_field_is_untouched(self):
        state = TransformState()
        state.solved = [type("Pair", (), {"lambda_hat": 3.0})()]
        s = torch.tensor([1.0, 1.0, -1.0, -1.0], dtype=torch.float64)
        v = torch.tensor([1.0, -1.0, 1.0, -1.0], dtype=torch.float64)
        Lv = torch.tensor([0.5, 0.25, 2.0, 1.0], dtype=torch.float64)
        assert torch.equal(deflate_values(state, v, Lv, [s]), Lv)

    def test_deflating_an_exact_eigenpair_gives_zero(self):
        rng = np.random.default_rng(0)
        M = rng.standard_normal((5, 5))
        A = DenseMatrix(M + M.T, symmetric=True)
        values, vectors = jacobi_eigs(A)
        s = torch.from_numpy(vectors[:, 2] * math.sqrt(5))
        state = TransformState()
        state.solved = [type("Pair", (), {"lambda_hat": float(values[2])})()]
        out = deflate_values(state, s, torch.from_numpy(A.data) @ s, [s])
        assert float(out.abs().max()) < 1e-10

    def test_unnormalized_snapshot_violates_invariant(self):
        state = TransformState()
        state.solved = [type("Pair", (), {"lambda_hat": 1.0})()]
        s = 2.0 * torch.ones(4, dtype=torch.float64)
        with pytest.raises(InvariantViolationError):
            deflate_values(state, torch.ones(4, dtype=torch.float64), torch.ones(4, dtype=torch.float64), [s])

    def test_snapshot_count_must_match(self):
        with pytest.raises(DimensionMismatchError):
            deflate_values(TransformState(), torch.ones(3), torch.ones(3), [torch.ones(3)])

    def test_project_out_removes_solved_directions(self):
        ones = torch.ones(4, dtype=torch.float64)
        alternating = torch.tensor([1.0, -1.0, 1.0, -1.0], dtype=torch.float64)
        rest = torch.tensor([1.0, 1.0, -1.0, -1.0], dtype=torch.float64)
        v = 3.0 * ones + 2.0 * alternating + rest
        assert torch.allclose(project_out(v, [ones]), 2.0 * alternating + rest, atol=1e-14)
        assert torch.allclose(project_out(v, [ones, alternating]), rest, atol=1e-14)
        assert torch.equal(project_out(v, []), v)


class TestFilter:
    def test_xi_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            TransformState(xi=0.0)

    def test_diagonal_stub_spectrum(self):
        # A = diag(2, 5) acting on two sample values
        v = torch.tensor([1.0, 0.0], dtype=torch.float64)
        w = torch.tensor([0.0, 1.0], dtype=torch.float64)
        A = torch.diag(torch.tensor([2.0, 5.0], dtype=torch.float64))
        for vec, expected in ((v, -0.01), (w, 3.1 * 2.9)):
            out = filtered_values(2.0, 0.1, vec, A @ vec, A @ (A @ vec))
            assert torch.allclose(out, expected * vec, atol=1e-12)

    def test_exact_eigenfunction_is_scaled_by_minus_xi_squared(self, sine_net, harmonic_1d, small_samples):
        state = TransformState(xi=0.1, lambda_hat=math.pi**2)
        w = filter_apply(state, harmonic_1d, sine_net, small_samples).detach()
        expected = -0.01 * torch.sin(math.pi * small_samples.points[:, 0])
        assert torch.allclose(w, expected, rtol=0, atol=1e-8)

    def test_filter_off_degenerates_to_deflated_operator(self, sine_net, harmonic_1d, small_samples):
        state = TransformState(filter_on=False)
        v, Lv, w = transform_values(state, harmonic_1d, sine_net, small_samples)
        assert torch.equal(w, Lv)
        assert torch.allclose(Lv, math.pi**2 * v, atol=1e-12)

    def test_deflated_filter_removes_installed_eigenpair(self, sine_net, harmonic_1d, small_samples):
        state = TransformState(xi=0.1, lambda_hat=0.0)
        state.install_snapshot(math.pi**2, sine_net, harmonic_1d, small_samples)
        w = filter_apply(state, harmonic_1d, sine_net, small_samples).detach()
        # deflation sends sin(pi x) to eigenvalue 0, and p(0) = lambda_hat^2 - xi^2 = -0.01
        v = torch.sin(math.pi * small_samples.points[:, 0])
        assert torch.allclose(w, -0.01 * v, atol=1e-8)

    def test_deflation_off_ignores_snapshots(self, sine_net, harmonic_1d, small_samples):
        state = TransformState(filter_on=False, deflation_on=False)
        state.install_snapshot(math.pi**2, sine_net, harmonic_1d, small_samples)
        _, Lv, w = transform_values(state, harmonic_1d, sine_net, small_samples)
        assert torch.equal(w, Lv)

    def test_only_one_filter_factor(self, sine_net, harmonic_1d, small_samples):
        state = TransformState(filter_degree=2)
        with pytest.raises(UnsupportedDegreeError):
            filter_apply(state, harmonic_1d, sine_net, small_samples)

    def test_snapshot_is_normalized_on_install(self, sine_net, harmonic_1d, small_samples):
        state = TransformState()
        pair = state.install_snapshot(1.0, sine_net, harmonic_1d, small_samples)
        assert discrete_inner(pair.values, pair.values).item() == pytest.approx(1.0, abs=1e-12)
        assert torch.allclose(pair.op_values, math.pi**2 * pair.values, atol=1e-10)
