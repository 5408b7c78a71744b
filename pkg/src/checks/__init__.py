# Property checks run by the validation suite.
from .results import PropertyResult
from .derivatives import DerivativeChecks
from .operators import OperatorChecks
from .deflation import DeflationChecks
from .filters import FilterChecks
from .baselines import BaselineChecks

__all__ = [
    "PropertyResult",
    "DerivativeChecks",   # Finite-difference checks of jets and parameter gradients.
    "OperatorChecks",     # Operator identities on analytic eigenfunctions.
    "DeflationChecks",    # Single and multi-vector deflation on random symmetric matrices.
    "FilterChecks",       # Filter polynomial spectra and the shift-invert example.
    "BaselineChecks",     # Jacobi, LU, power method and FDM accuracy/order.
]
