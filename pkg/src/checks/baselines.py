"""
Checks of the classical baselines: Jacobi, LU solves, power method and FDM.
"""
import logging
import math
from typing import List, Sequence

import numpy as np

from src.baselines.dense import DenseMatrix, jacobi_eigs, power_method, solve_linear
from src.baselines.fdm import GridSpec, fdm_assemble, fdm_eigenvalues
from src.checks.deflation import random_symmetric
from src.checks.results import PropertyResult
from src.operators.domain import OperatorSpec

logger = logging.getLogger(__name__)


def harmonic_fdm_closed_form(m: int) -> np.ndarray:
    """(4/h^2) sin^2(k pi h / 2), k = 1..m, for the 1D Dirichlet grid."""
    h = 1.0 / (m + 1)
    k = np.arange(1, m + 1)
    return 4.0 / h**2 * np.sin(k * math.pi * h / 2.0) ** 2


def convergence_orders(op: OperatorSpec, grids: Sequence[int], exact: float) -> List[float]:
    errors = [abs(fdm_eigenvalues(op, m).eigenvalues[0] - exact) / exact for m in grids]
    return [math.log2(errors[j] / errors[j + 1]) for j in range(len(errors) - 1)]


class BaselineChecks:
    def __init__(self, seed: int = 0) -> None:
        self.seed = seed

    def jacobi_residual(self) -> PropertyResult:
        rng = np.random.default_rng(self.seed + 4)
        A = random_symmetric(rng, 50)
        values, vectors = jacobi_eigs(A)
        residual = np.linalg.norm(A.data @ vectors - vectors * values) / np.linalg.norm(A.data)
        orthogonality = np.max(np.abs(vectors.T @ vectors - np.eye(50)))
        return PropertyResult.measure("jacobi_residual", max(float(residual), float(orthogonality)), 1e-10)

    def solve_linear_residual(self, systems: int = 200) -> PropertyResult:
        rng = np.random.default_rng(self.seed + 5)
        worst = 0.0
        for _ in range(systems):
            n = int(rng.integers(2, 31))
            A = DenseMatrix(rng.standard_normal((n, n)) + n * np.eye(n))
            b = rng.standard_normal(n)
            x = solve_linear(A, b)
            bound = np.linalg.norm(A.data, np.inf) * np.linalg.norm(x, np.inf) + np.linalg.norm(b, np.inf)
            worst = max(worst, float(np.linalg.norm(A.data @ x - b, np.inf) / bound))
        return PropertyResult.measure("solve_linear_residual", worst, 1e-10)

    def power_method_random(self, matrices: int = 20) -> PropertyResult:
        rng = np.random.default_rng(self.seed + 6)
        worst = 0.0
        for _ in range(matrices):
            A = random_symmetric(rng, 8)
            values, _ = jacobi_eigs(A)
            j = int(rng.integers(8))
            gap = float(np.min(np.abs(np.delete(values, j) - values[j])))
            # nearest competitor is at least 3x farther from sigma than the target
            sigma = values[j] + 0.25 * gap
            result = power_method(A, sigma, rng.standard_normal(8))
            worst = max(worst, abs(result.lambda_ - values[j]) if result.converged else math.inf)
        return PropertyResult.measure("power_method_random", worst, 1e-8)

    def fdm_closed_form(self) -> PropertyResult:
        op = OperatorSpec.harmonic(1)
        worst = 0.0
        for m in (3, 15, 31):
            A = fdm_assemble(op, GridSpec.for_operator(op, m))
            values, _ = jacobi_eigs(A)
            exact = harmonic_fdm_closed_form(m)
            worst = max(worst, float(np.max(np.abs(values - exact) / exact)))
        return PropertyResult.measure("fdm_harmonic_closed_form", worst, 1e-10)

    def fdm_order(self) -> List[PropertyResult]:
        orders_1d = convergence_orders(OperatorSpec.harmonic(1), (15, 31, 63), math.pi**2)
        orders_2d = convergence_orders(OperatorSpec.harmonic(2), (7, 15), 2 * math.pi**2)
        logger.info(f"FDM convergence orders: 1D {orders_1d}, 2D {orders_2d}")
        return [
            PropertyResult.measure("fdm_order_1d", max(abs(o - 2.0) for o in orders_1d), 0.1),
            PropertyResult.measure("fdm_order_2d", max(abs(o - 2.0) for o in orders_2d), 0.1),
        ]

    def run(self) -> List[PropertyResult]:
        return [
            self.jacobi_residual(),
            self.solve_linear_residual(),
            self.power_method_random(),
            self.fdm_closed_form(),
        ] + self.fdm_order()
