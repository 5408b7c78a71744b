"""
Central-difference discretization of the three operators on tensor grids.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
import torch

from src.errors import CapacityError, InvalidInputError, UnsupportedQueryError
from src.baselines.dense import JACOBI_MAX_N, DenseMatrix, deflated_power_method, jacobi_eigs, power_method
from src.operators.differential import potential_jet
from src.operators.domain import Boundary, OperatorKind, OperatorSpec

logger = logging.getLogger(__name__)

DEFAULT_MAX_BYTES = 2 * 1024**3


@dataclass(frozen=True)
class GridSpec:
    dim: int
    points_per_axis: int
    box: Tuple[Tuple[float, float], ...]
    periodic: bool = False

    def __post_init__(self) -> None:
        if self.points_per_axis < 2:
            raise InvalidInputError(f"Need at least 2 points per axis, got {self.points_per_axis}.")
        if len(self.box) != self.dim:
            raise InvalidInputError(f"Box has {len(self.box)} intervals for dimension {self.dim}.")

    @classmethod
    def for_operator(cls, op: OperatorSpec, m: int) -> "GridSpec":
        return cls(op.dim, m, op.domain.box, op.domain.boundary is Boundary.PERIODIC)

    @property
    def unknowns(self) -> int:
        return self.points_per_axis**self.dim

    def spacing(self, axis: int = 0) -> float:
        a, b = self.box[axis]
        m = self.points_per_axis
        return (b - a) / m if self.periodic else (b - a) / (m + 1)

    def axis_points(self, axis: int) -> np.ndarray:
        a, _ = self.box[axis]
        h = self.spacing(axis)
        offset = 0 if self.periodic else 1
        return a + h * (np.arange(self.points_per_axis) + offset)

    def points(self) -> np.ndarray:
        """(m^D, D) grid points, last axis varying fastest."""
        mesh = np.meshgrid(*(self.axis_points(k) for k in range(self.dim)), indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)


def _second_difference(m: int, h: float, periodic: bool) -> sp.csr_matrix:
    """1D stencil of -d^2/dx^2."""
    T = sp.diags([-np.ones(m - 1), 2.0 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1], format="lil")
    if periodic:
        T[0, m - 1] += -1.0
        T[m - 1, 0] += -1.0
    return (T / h**2).tocsr()


def _first_difference(m: int, h: float) -> sp.csr_matrix:
    """Periodic central difference (v_{j+1} - v_{j-1}) / 2h."""
    C = sp.diags([-np.ones(m - 1), np.ones(m - 1)], [-1, 1], format="lil")
    C[0, m - 1] += -1.0
    C[m - 1, 0] += 1.0
    return (C / (2.0 * h)).tocsr()


def _on_axis(stencil: sp.spmatrix, axis: int, dim: int, m: int) -> sp.csr_matrix:
    before = sp.identity(m**axis, format="csr")
    after = sp.identity(m ** (dim - axis - 1), format="csr")
    return sp.kron(before, sp.kron(stencil, after)).tocsr()


def fdm_assemble(op: OperatorSpec, grid: GridSpec, max_bytes: int = DEFAULT_MAX_BYTES) -> DenseMatrix:
    n = grid.unknowns
    required = n * n * 8
    if required > max_bytes:
        raise CapacityError(
            f"Dense FDM matrix with {n} unknowns needs {required} bytes (limit {max_bytes}).", required_bytes=required
        )
    m, D = grid.points_per_axis, grid.dim
    neg_lap = sum(_on_axis(_second_difference(m, grid.spacing(k), grid.periodic), k, D, m) for k in range(D))

    if op.kind is OperatorKind.HARMONIC:
        return DenseMatrix(neg_lap.toarray(), symmetric=True)

    V = potential_jet(op, torch.from_numpy(grid.points()))
    if op.kind is OperatorKind.OSCILLATOR:
        matrix = 0.5 * neg_lap + sp.diags(V.value.numpy())
        return DenseMatrix(matrix.toarray(), symmetric=True)

    grad_V = V.gradient.numpy()
    drift = sum(sp.diags(grad_V[:, k]) @ _on_axis(_first_difference(m, grid.spacing(k)), k, D, m) for k in range(D))
    matrix = neg_lap - drift - sp.diags(V.laplacian().numpy())
    return DenseMatrix(matrix.toarray(), symmetric=False)


@dataclass
class FdmSpectrum:
    eigenvalues: List[float]
    residuals: List[float]
    iterations: int
    converged: bool


def _residual(A: DenseMatrix, lam: float, x: np.ndarray) -> float:
    x = x / np.linalg.norm(x)
    return float(np.linalg.norm(A.data @ x - lam * x))


def fdm_eigenvalues(
    op: OperatorSpec,
    m: int,
    count: int = 1,
    sigma: Optional[float] = None,
    max_bytes: int = DEFAULT_MAX_BYTES,
    seed: int = 0,
) -> FdmSpectrum:
    """Smallest `count` FDM eigenvalues (those nearest sigma for the power-iteration paths)."""
    A = fdm_assemble(op, GridSpec.for_operator(op, m), max_bytes)
    if op.kind is OperatorKind.FOKKER_PLANCK:
        if count > 1:
            raise UnsupportedQueryError("The non-symmetric Fokker-Planck matrix supports a single eigenvalue.")
        shift = -0.1 if sigma is None else sigma
        x0 = np.random.default_rng(seed).standard_normal(A.n)
        result = power_method(A, shift, x0, k_max=5000)
        return FdmSpectrum([result.lambda_], [_residual(A, result.lambda_, result.x)], result.iters, result.converged)

    if A.n <= JACOBI_MAX_N:
        values, vectors = jacobi_eigs(A)
        picked = range(min(count, A.n))
        residuals = [_residual(A, values[j], vectors[:, j]) for j in picked]
        return FdmSpectrum([float(values[j]) for j in picked], residuals, 0, True)

    results = deflated_power_method(A, 0.0 if sigma is None else sigma, count, seed=seed)
    return FdmSpectrum(
        [r.lambda_ for r in results],
        [_residual(A, r.lambda_, r.x) for r in results],
        sum(r.iters for r in results),
        all(r.converged for r in results),
    )
