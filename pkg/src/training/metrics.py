"""
Error metrics of eigenpair estimates against known eigenvalues.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set

import torch

from src.operators.analytic import AnalyticSolution
from src.operators.ansatz import AnsatzNet, ansatz_jet
from src.operators.differential import apply_operator
from src.operators.domain import OperatorSpec
from src.transforms.function_level import discrete_norm

logger = logging.getLogger(__name__)


@dataclass
class ErrorMetrics:
    reference: Optional[float]
    abs_err: Optional[float]
    rel_err: Optional[float]
    residual: Optional[float]


def eigen_residual(net: AnsatzNet, op: OperatorSpec, samples, lambda_hat: float) -> float:
    """sqrt(sum_j (Lv - lambda v)^2) with v scaled to unit discrete norm."""
    with torch.no_grad():
        jet = ansatz_jet(net, samples.points)
        Lv = apply_operator(op, jet, samples.points)
        norm = float(discrete_norm(jet.value))
        if norm == 0.0:
            return math.inf
        r = (Lv - lambda_hat * jet.value) / norm
        return float(torch.sqrt((r * r).sum()))


def match_reference(lambda_hat: float, truth: Sequence[float], consumed: Set[int]) -> Optional[int]:
    """Index of the nearest true eigenvalue not consumed yet (ties go to the lower index)."""
    best = None
    for index, value in enumerate(truth):
        if index in consumed:
            continue
        if best is None or abs(lambda_hat - value) < abs(lambda_hat - truth[best]):
            best = index
    if best is not None:
        consumed.add(best)
    return best


def error_metrics(
    estimate,
    truth: AnalyticSolution,
    op: OperatorSpec,
    samples,
    consumed: Optional[Set[int]] = None,
) -> ErrorMetrics:
    """
    Absolute/relative eigenvalue error and eigenpair residual.

    rel_err is None when the matched eigenvalue is zero; abs_err and rel_err are
    None when every known eigenvalue has already been matched.
    """
    consumed = set() if consumed is None else consumed
    residual = None
    if estimate.params_best is not None:
        residual = eigen_residual(estimate.params_best, op, samples, estimate.lambda_hat)
    index = match_reference(estimate.lambda_hat, truth.eigenvalues, consumed)
    if index is None:
        return ErrorMetrics(None, None, None, residual)
    reference = truth.eigenvalues[index]
    abs_err = abs(estimate.lambda_hat - reference)
    rel_err = abs_err / abs(reference) if reference != 0.0 else None
    return ErrorMetrics(reference, abs_err, rel_err, residual)


def evaluate_estimates(estimates: Sequence, truth: AnalyticSolution, op: OperatorSpec, samples) -> List[ErrorMetrics]:
    """Metrics for every estimate; matching runs in ascending order of the estimates."""
    consumed: Set[int] = set()
    results: List[Optional[ErrorMetrics]] = [None] * len(estimates)
    for position in sorted(range(len(estimates)), key=lambda k: estimates[k].lambda_hat):
        results[position] = error_metrics(estimates[position], truth, op, samples, consumed)
    return results
