import math

import numpy as np
import pytest

from src.baselines.dense import (
    DenseMatrix,
    deflated_power_method,
    factorize,
    jacobi_eigs,
    power_method,
    solve_linear,
)
from src.errors import InvalidInputError, SingularMatrixError


def _rotated(values, seed):
    Q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((len(values), len(values))))
    return DenseMatrix(Q @ np.diag(values) @ Q.T, symmetric=True)


class TestJacobi:
    def test_diagonal_matrix(self):
        values, vectors = jacobi_eigs(DenseMatrix(np.diag([3.0, 1.0, 2.0]), symmetric=True))
        assert values.tolist() == [1.0, 2.0, 3.0]
        assert np.array_equal(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])

    def test_two_by_two(self):
        values, vectors = jacobi_eigs(DenseMatrix([[2.0, 1.0], [1.0, 2.0]], symmetric=True))
        assert values == pytest.approx([1.0, 3.0], abs=1e-14)
        assert abs(vectors[:, 0] @ np.array([1.0, -1.0])) == pytest.approx(math.sqrt(2.0))
        assert abs(vectors[:, 1] @ np.array([1.0, 1.0])) == pytest.approx(math.sqrt(2.0))

    def test_random_residual(self):
        M = np.random.default_rng(1).standard_normal((50, 50))
        A = DenseMatrix(M + M.T, symmetric=True)
        values, vectors = jacobi_eigs(A)
        assert np.linalg.norm(A.data @ vectors - vectors * values) < 1e-10 * np.linalg.norm(A.data)
        assert np.allclose(vectors.T @ vectors, np.eye(50), atol=1e-12)

    def test_odd_size_matches_numpy(self):
        A = _rotated([-2.0, 0.5, 1.0, 4.0, 7.5], seed=2)
        values, _ = jacobi_eigs(A)
        assert values == pytest.approx([-2.0, 0.5, 1.0, 4.0, 7.5], abs=1e-12)

    def test_non_symmetric_is_rejected(self):
        with pytest.raises(InvalidInputError):
            jacobi_eigs(DenseMatrix([[1.0, 2.0], [0.0, 1.0]]))


class TestSolve:
    def test_identity(self):
        b = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(solve_linear(DenseMatrix(np.eye(3)), b), b)

    def test_diagonal(self):
        assert solve_linear(DenseMatrix(np.diag([2.0, 4.0])), [2.0, 8.0]) == pytest.approx([1.0, 2.0])

    def test_random_well_conditioned(self):
        rng = np.random.default_rng(3)
        A = DenseMatrix(rng.standard_normal((30, 30)) + 30 * np.eye(30))
        b = rng.standard_normal(30)
        x = solve_linear(A, b)
        bound = 1e-10 * (np.linalg.norm(A.data, np.inf) * np.linalg.norm(x, np.inf) + np.linalg.norm(b, np.inf))
        assert np.linalg.norm(A.data @ x - b, np.inf) < bound

    def test_singular_matrix(self):
        with pytest.raises(SingularMatrixError):
            factorize(DenseMatrix(np.diag([1.0, 0.0])))

    def test_rhs_shape(self):
        with pytest.raises(InvalidInputError):
            solve_linear(DenseMatrix(np.eye(2)), [1.0, 2.0, 3.0])


class TestPowerMethod:
    EXAMPLE = DenseMatrix(np.diag([10.0, 3.0, 2.0]), symmetric=True)

    def test_shift_invert_example(self):
        result = power_method(self.EXAMPLE, 9.5, np.ones(3) / math.sqrt(3.0), k_max=30)
        assert result.converged
        assert result.lambda_ == pytest.approx(10.0, abs=1e-10)
        assert result.iters <= 30

    def test_double_eigenvalue(self):
        A = _rotated([1.0, 4.0, 4.0, 9.0], seed=4)
        result = power_method(A, 3.9, np.ones(4))
        assert result.lambda_ == pytest.approx(4.0, abs=1e-10)
        assert np.linalg.norm(A.data @ result.x - 4.0 * result.x) < 1e-8

    def test_exact_eigenvector_converges_in_one_step(self):
        result = power_method(self.EXAMPLE, 9.5, np.array([1.0, 0.0, 0.0]))
        assert result.iters == 1
        assert result.lambda_ == 10.0

    def test_negative_transformed_eigenvalue_converges(self):
        # nearest eigenvalue lies below the shift, so the iterate flips sign every step
        result = power_method(self.EXAMPLE, 2.4, np.ones(3))
        assert result.converged
        assert result.lambda_ == pytest.approx(2.0, abs=1e-10)

    def test_unshifted_iteration_finds_largest_modulus(self):
        result = power_method(DenseMatrix(np.diag([1.0, 2.0, -5.0]), symmetric=True), None, np.ones(3))
        assert result.converged
        assert result.lambda_ == pytest.approx(-5.0, abs=1e-10)

    def test_budget_exhaustion_is_reported(self):
        result = power_method(_rotated([1.0, 1.1, 5.0], seed=5), 0.0, np.ones(3), k_max=2)
        assert not result.converged
        assert result.iters == 2
        assert len(result.history) == 2

    def test_zero_start_is_rejected(self):
        with pytest.raises(InvalidInputError):
            power_method(self.EXAMPLE, 9.5, np.zeros(3))

    def test_shift_on_eigenvalue_is_singular(self):
        with pytest.raises(SingularMatrixError):
            power_method(self.EXAMPLE, 3.0, np.ones(3))


def test_deflated_power_method_finds_eigenvalues_nearest_shift():
    A = _rotated([0.5, 1.5, 3.0, 7.0, 10.0, 12.0], seed=6)
    results = deflated_power_method(A, 0.0, 3, seed=1)
    assert [r.lambda_ for r in results] == pytest.approx([0.5, 1.5, 3.0], abs=1e-9)
    assert all(r.converged for r in results)
