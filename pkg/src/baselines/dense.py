"""
Dense linear algebra used as oracle and classical baseline.

jacobi_eigs is a round-robin (parallel-ordering) Jacobi eigensolver; every round
rotates n/2 disjoint index pairs at once. power_method follows the textbook
iteration with an optional shift-invert through a cached LU factorization.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from src.errors import InvalidInputError, NonConvergenceError, SingularMatrixError

logger = logging.getLogger(__name__)

JACOBI_MAX_N = 512


@dataclass
class DenseMatrix:
    data: np.ndarray
    symmetric: bool = False

    def __post_init__(self) -> None:
        self.data = np.array(self.data, dtype=np.float64)
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise InvalidInputError(f"Expected a square matrix, got shape {self.data.shape}.")
        if self.symmetric:
            upper = np.triu(self.data)
            self.data = upper + np.triu(self.data, 1).T

    @classmethod
    def from_array(cls, a, symmetric: Optional[bool] = None) -> "DenseMatrix":
        a = np.asarray(a, dtype=np.float64)
        if symmetric is None:
            symmetric = a.ndim == 2 and a.shape[0] == a.shape[1] and bool(np.array_equal(a, a.T))
        return cls(a, symmetric)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass
class PowerIterState:
    x: np.ndarray
    prev: np.ndarray
    k: int = 0
    delta: float = float("inf")


@dataclass
class PowerResult:
    lambda_: float
    x: np.ndarray
    iters: int
    converged: bool
    delta: float
    history: List[float] = field(default_factory=list)


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Pairings of the circle method; each round covers disjoint pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigs(A: DenseMatrix, tol: float = 1e-12, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ascending and orthonormal eigenvectors (columns) of a symmetric matrix."""
    if not A.symmetric:
        raise InvalidInputError("jacobi_eigs requires a symmetric matrix.")
    n = A.n
    if n > JACOBI_MAX_N:
        raise InvalidInputError(f"jacobi_eigs is limited to n <= {JACOBI_MAX_N}, got {n}.")
    M = A.data.copy()
    V = np.eye(n)
    threshold = tol * float(np.linalg.norm(M))
    rounds = _round_robin(n)

    sweeps = 0
    while _off_norm(M) > threshold:
        if sweeps >= max_sweeps:
            raise NonConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps.", delta=_off_norm(M))
        for p, q in rounds:
            apq = M[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            app, aqq = M[p, p], M[q, q]
            safe = np.where(active, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c

            Mp, Mq = M[:, p].copy(), M[:, q].copy()
            M[:, p] = c * Mp - s * Mq
            M[:, q] = s * Mp + c * Mq
            Mp, Mq = M[p, :].copy(), M[q, :].copy()
            M[p, :] = c[:, None] * Mp - s[:, None] * Mq
            M[q, :] = s[:, None] * Mp + c[:, None] * Mq
            M[p, q] = 0.0
            M[q, p] = 0.0

            Vp, Vq = V[:, p].copy(), V[:, q].copy()
            V[:, p] = c * Vp - s * Vq
            V[:, q] = s * Vp + c * Vq
        sweeps += 1

    values = np.diag(M).copy()
    order = np.argsort(values, kind="stable")
    logger.debug(f"Jacobi converged in {sweeps} sweeps (n={n}).")
    return values[order], V[:, order]


def factorize(A: DenseMatrix, shift: float = 0.0):
    """LU factors of A - shift*I with a zero-pivot check."""
    M = A.data - shift * np.eye(A.n)
    lu, piv = lu_factor(M, check_finite=True)
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError(f"Zero pivot in LU factorization (shift={shift}).")
    return lu, piv


def solve_linear(A: DenseMatrix, b) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (A.n,):
        raise InvalidInputError(f"Right-hand side has shape {b.shape}, expected ({A.n},).")
    return lu_solve(factorize(A), b)


def _aligned_delta(x: np.ndarray, prev: np.ndarray) -> float:
    sign = 1.0 if float(x @ prev) >= 0.0 else -1.0
    return float(np.linalg.norm(sign * x - prev))


def power_method(
    A: DenseMatrix,
    sigma: Optional[float],
    x0,
    k_max: int = 1000,
    eps: float = 1e-12,
    orthogonal_to: Sequence[np.ndarray] = (),
) -> PowerResult:
    """
    Power iteration on (A - sigma I)^-1 (or on A when sigma is None).

    Convergence is declared when the sign-aligned step ||x_k - x_{k-1}|| drops
    below eps; the eigenvalue is the Rayleigh quotient on the original A.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    norm0 = np.linalg.norm(x0)
    if norm0 == 0.0:
        raise InvalidInputError("Starting vector must be nonzero.")
    lu = factorize(A, sigma) if sigma is not None else None

    def project(y: np.ndarray) -> np.ndarray:
        for q in orthogonal_to:
            y = y - (q @ y) * q
        return y

    x = project(x0 / norm0)
    x = x / np.linalg.norm(x)
    state = PowerIterState(x=x, prev=x)
    history: List[float] = []
    while state.k < k_max:
        y = lu_solve(lu, state.x) if lu is not None else A.data @ state.x
        y = project(y)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            raise SingularMatrixError("Power iterate collapsed to zero.")
        state.prev, state.x = state.x, y / norm
        state.k += 1
        state.delta = _aligned_delta(state.x, state.prev)
        history.append(state.delta)
        if state.delta < eps:
            break

    x = state.x
    lam = float(x @ (A.data @ x) / (x @ x))
    converged = state.delta < eps
    if not converged:
        logger.warning(f"Power method stopped after {state.k} iterations with delta={state.delta:.3e}.")
    return PowerResult(lam, x, state.k, converged, state.delta, history)


def deflated_power_method(
    A: DenseMatrix,
    sigma: float,
    count: int,
    k_max: int = 2000,
    eps: float = 1e-12,
    seed: int = 0,
) -> List[PowerResult]:
    """The `count` eigenpairs of a symmetric matrix nearest sigma, deflating converged vectors."""
    if not A.symmetric:
        raise InvalidInputError("Deflated power iteration needs a symmetric matrix.")
    rng = np.random.default_rng(seed)
    found: List[np.ndarray] = []
    results: List[PowerResult] = []
    for _ in range(count):
        result = power_method(A, sigma, rng.standard_normal(A.n), k_max=k_max, eps=eps, orthogonal_to=found)
        found.append(result.x)
        results.append(result)
    return sorted(results, key=lambda r: r.lambda_)
