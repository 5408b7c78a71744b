"""
Deflation on random symmetric matrices, checked with the Jacobi oracle.
"""
import logging
from typing import List

import numpy as np

from src.baselines.dense import DenseMatrix, jacobi_eigs
from src.checks.results import PropertyResult
from src.transforms.matrix import matrix_deflate

logger = logging.getLogger(__name__)


def random_symmetric(rng: np.random.Generator, n: int) -> DenseMatrix:
    M = rng.standard_normal((n, n))
    return DenseMatrix(M + M.T, symmetric=True)


def _eigvec_residual(D: DenseMatrix, vectors: np.ndarray, values: np.ndarray) -> float:
    """max_j ||D v_j - mu_j v_j||: A's eigenvectors are eigenvectors of D with the expected eigenvalues."""
    return float(np.max(np.linalg.norm(D.data @ vectors - vectors * values, axis=0)))


class DeflationChecks:
    def __init__(self, matrices: int = 50, n: int = 8, seed: int = 0) -> None:
        self.matrices = matrices
        self.n = n
        self.seed = seed

    def single_vector(self) -> List[PropertyResult]:
        rng = np.random.default_rng(self.seed)
        worst_values = worst_vectors = 0.0
        for _ in range(self.matrices):
            A = random_symmetric(rng, self.n)
            values, vectors = jacobi_eigs(A)
            j = int(rng.integers(self.n))
            sigma = float(rng.uniform(-3.0, 3.0))
            D = matrix_deflate(A, [vectors[:, j]], [sigma])
            expected = values.copy()
            expected[j] -= sigma
            deflated, _ = jacobi_eigs(D)
            worst_values = max(worst_values, float(np.max(np.abs(np.sort(expected) - deflated))))
            worst_vectors = max(worst_vectors, _eigvec_residual(D, vectors, expected))
        return [
            PropertyResult.measure("deflation_single_spectrum", worst_values, 1e-10),
            PropertyResult.measure("deflation_single_eigenvectors", worst_vectors, 1e-8),
        ]

    def multi_vector(self) -> List[PropertyResult]:
        rng = np.random.default_rng(self.seed + 1)
        worst_values = worst_vectors = 0.0
        for _ in range(self.matrices):
            A = random_symmetric(rng, self.n)
            values, vectors = jacobi_eigs(A)
            k = int(rng.integers(2, 4))
            picked = rng.choice(self.n, size=k, replace=False)
            D = matrix_deflate(A, [vectors[:, j] for j in picked], [values[j] for j in picked])
            expected = values.copy()
            expected[picked] = 0.0
            deflated, _ = jacobi_eigs(D)
            worst_values = max(worst_values, float(np.max(np.abs(np.sort(expected) - deflated))))
            worst_vectors = max(worst_vectors, _eigvec_residual(D, vectors, expected))
        return [
            PropertyResult.measure("deflation_multi_spectrum", worst_values, 1e-10),
            PropertyResult.measure("deflation_multi_eigenvectors", worst_vectors, 1e-8),
        ]

    def run(self) -> List[PropertyResult]:
        return self.single_vector() + self.multi_vector()
