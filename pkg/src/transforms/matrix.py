"""
Matrix-level deflation, shift-invert and filter polynomials.

Used by the property checks to confirm on dense symmetric matrices what the
function-level transforms rely on: deflation moves only the listed
eigenvalues, and both transforms keep the eigenvectors.
"""
import logging
from typing import List, Sequence

import numpy as np

from src.errors import InvalidInputError, SingularShiftError
from src.baselines.dense import DenseMatrix, jacobi_eigs

logger = logging.getLogger(__name__)

GRAM_TOL = 1e-8
SHIFT_TOL = 1e-12


def matrix_deflate(A: DenseMatrix, V: Sequence[np.ndarray], sigmas: Sequence[float]) -> DenseMatrix:
    """A - sum_k sigma_k v_k v_k^T for orthonormal v_k."""
    if len(V) != len(sigmas):
        raise InvalidInputError(f"{len(V)} vectors but {len(sigmas)} shifts.")
    if not len(V):
        return DenseMatrix(A.data.copy(), A.symmetric)
    Q = np.column_stack([np.asarray(v, dtype=np.float64) for v in V])
    gram_error = float(np.max(np.abs(Q.T @ Q - np.eye(Q.shape[1]))))
    if gram_error > GRAM_TOL:
        raise InvalidInputError(f"Deflation vectors are not orthonormal (Gram deviation {gram_error:.3e}).")
    return DenseMatrix(A.data - (Q * np.asarray(sigmas, dtype=np.float64)) @ Q.T, A.symmetric)


def matrix_shift_invert_spectrum(A: DenseMatrix, sigma: float) -> List[float]:
    """1/(lambda - sigma) for every eigenvalue, ordered by decreasing modulus."""
    values, _ = jacobi_eigs(A)
    gaps = values - sigma
    if np.any(np.abs(gaps) <= SHIFT_TOL):
        raise SingularShiftError(f"Shift {sigma} coincides with an eigenvalue of A.")
    mu = 1.0 / gaps
    return [float(v) for v in mu[np.argsort(-np.abs(mu), kind="stable")]]


def matrix_filter(A: DenseMatrix, lambda_hat: float, xi: float) -> DenseMatrix:
    """p(A) = (A - (lambda_hat - xi) I)(A - (lambda_hat + xi) I)."""
    eye = np.eye(A.n)
    P = (A.data - (lambda_hat - xi) * eye) @ (A.data - (lambda_hat + xi) * eye)
    return DenseMatrix(P, A.symmetric)


def filter_polynomial(lam, lambda_hat: float, xi: float):
    return (lam - lambda_hat) ** 2 - xi**2


def spectral_gap_ratio(mu: Sequence[float]) -> float:
    """|mu_1| / |mu_2| for the two largest moduli."""
    moduli = sorted((abs(float(m)) for m in mu), reverse=True)
    if len(moduli) < 2:
        raise InvalidInputError("Need at least two eigenvalues for a gap ratio.")
    if moduli[1] == 0.0:
        return float("inf")
    return moduli[0] / moduli[1]
