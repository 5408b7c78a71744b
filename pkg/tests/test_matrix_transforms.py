import numpy as np
import pytest

from src.baselines.dense import DenseMatrix, jacobi_eigs
from src.checks.filters import published_gap_ratio
from src.errors import InvalidInputError, SingularShiftError
from src.transforms.matrix import (
    filter_polynomial,
    matrix_deflate,
    matrix_filter,
    matrix_shift_invert_spectrum,
    spectral_gap_ratio,
)

EXAMPLE = DenseMatrix(np.diag([10.0, 3.0, 2.0]), symmetric=True)


def _random_symmetric(seed, n):
    M = np.random.default_rng(seed).standard_normal((n, n))
    return DenseMatrix(M + M.T, symmetric=True)


def test_deflating_the_top_eigenvalue_of_the_example():
    D = matrix_deflate(EXAMPLE, [np.array([1.0, 0.0, 0.0])], [10.0])
    values, _ = jacobi_eigs(D)
    assert values.tolist() == pytest.approx([0.0, 2.0, 3.0], abs=1e-14)


def test_zero_shift_leaves_matrix_unchanged():
    D = matrix_deflate(EXAMPLE, [np.array([0.0, 1.0, 0.0])], [0.0])
    assert np.array_equal(D.data, EXAMPLE.data)


def test_deflating_two_eigenpairs_of_random_matrix():
    A = _random_symmetric(3, 8)
    values, vectors = jacobi_eigs(A)
    D = matrix_deflate(A, [vectors[:, 7], vectors[:, 6]], [values[7], values[6]])
    deflated, _ = jacobi_eigs(D)
    expected = np.sort(np.concatenate([[0.0, 0.0], values[:6]]))
    assert np.max(np.abs(deflated - expected)) < 1e-10
    residual = D.data @ vectors[:, :6] - vectors[:, :6] * values[:6]
    assert np.max(np.linalg.norm(residual, axis=0)) < 1e-10


def test_deflation_vectors_must_be_orthonormal():
    with pytest.raises(InvalidInputError):
        matrix_deflate(EXAMPLE, [np.array([1.0, 1.0, 0.0])], [1.0])


def test_shift_invert_example_spectrum():
    mu = matrix_shift_invert_spectrum(EXAMPLE, 9.5)
    assert mu == pytest.approx([2.0, -1.0 / 6.5, -1.0 / 7.5], abs=1e-12)


def test_shift_invert_without_shift():
    mu = matrix_shift_invert_spectrum(DenseMatrix(np.diag([1.0, 2.0]), symmetric=True), 0.0)
    assert mu == pytest.approx([1.0, 0.5])


def test_shift_on_an_eigenvalue_is_singular():
    with pytest.raises(SingularShiftError):
        matrix_shift_invert_spectrum(EXAMPLE, 3.0)


def test_gap_ratio_of_the_example():
    mu = matrix_shift_invert_spectrum(EXAMPLE, 9.5)
    assert spectral_gap_ratio(mu) == pytest.approx(13.0)


def test_published_gap_ratio_of_the_example():
    mu = matrix_shift_invert_spectrum(EXAMPLE, 9.5)
    assert published_gap_ratio(mu) == pytest.approx(15.04, abs=0.01)
    assert published_gap_ratio([2.0, 0.5]) == 4.0
    with pytest.raises(InvalidInputError):
        published_gap_ratio([2.0])


def test_gap_ratio_needs_two_values():
    with pytest.raises(InvalidInputError):
        spectral_gap_ratio([1.0])


def test_filter_of_diagonal_stub():
    P = matrix_filter(DenseMatrix(np.diag([2.0, 5.0]), symmetric=True), 2.0, 0.1)
    assert np.diag(P.data) == pytest.approx([-0.01, 8.99])
    assert P.data[0, 1] == 0.0


def test_filter_keeps_eigenvectors():
    A = _random_symmetric(5, 6)
    values, vectors = jacobi_eigs(A)
    P = matrix_filter(A, 0.7, 0.1)
    mapped = filter_polynomial(values, 0.7, 0.1)
    assert np.max(np.abs(P.data @ vectors - vectors * mapped)) < 1e-10
