# Differential operators, their domains and analytic ground truth.
from .domain import Boundary, DomainSpec, OperatorKind, OperatorSpec
from .ansatz import AnsatzNet, Embedding, Multiplier, ansatz_jet, build_ansatz
from .differential import apply_operator, apply_operator_nested, potential_jet
from .analytic import AnalyticSolution, analytic_spectrum, known_count, reference_jet

__all__ = [
    "Boundary",
    "DomainSpec",
    "OperatorKind",
    "OperatorSpec",
    "AnsatzNet",
    "Embedding",
    "Multiplier",
    "ansatz_jet",
    "build_ansatz",
    "apply_operator",
    "apply_operator_nested",
    "potential_jet",
    "AnalyticSolution",
    "analytic_spectrum",
    "known_count",
    "reference_jet",
]
