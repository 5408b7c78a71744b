# Classical baselines and oracles: dense eigensolvers, LU solves, power method, FDM.
from .dense import (
    DenseMatrix,
    PowerIterState,
    PowerResult,
    deflated_power_method,
    jacobi_eigs,
    power_method,
    solve_linear,
)
from .fdm import FdmSpectrum, GridSpec, fdm_assemble, fdm_eigenvalues

__all__ = [
    "DenseMatrix",
    "PowerIterState",
    "PowerResult",
    "deflated_power_method",
    "jacobi_eigs",
    "power_method",
    "solve_linear",
    "FdmSpectrum",
    "GridSpec",
    "fdm_assemble",
    "fdm_eigenvalues",
]
