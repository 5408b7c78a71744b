"""
Operator identities on analytic eigenfunctions.
"""
import itertools
import logging
import math
from typing import List

import torch

from src.checks.results import PropertyResult
from src.operators.analytic import harmonic_eigenvalues, reference_jet
from src.operators.differential import apply_operator
from src.operators.domain import OperatorSpec
from src.training.sampling import sample_domain

logger = logging.getLogger(__name__)


class OperatorChecks:
    def __init__(self, points: int = 1000, seed: int = 0) -> None:
        self.points = points
        self.seed = seed

    def fokker_planck_zero_mode(self) -> PropertyResult:
        g = torch.Generator().manual_seed(self.seed)
        worst = 0.0
        for dim in (1, 2):
            for _ in range(5):
                coeffs = (0.1 + 0.9 * torch.rand(dim, generator=g, dtype=torch.float64)).tolist()
                op = OperatorSpec.fokker_planck(coeffs)
                x = sample_domain(op.domain, self.points, seed=self.seed + dim).points
                residual = apply_operator(op, reference_jet(op, x), x)
                worst = max(worst, float(residual.abs().max()))
        return PropertyResult.measure("fokker_planck_zero_mode", worst, 1e-10)

    def ground_states(self) -> PropertyResult:
        worst = 0.0
        for op, value in ((OperatorSpec.harmonic(2), 2 * math.pi**2), (OperatorSpec.oscillator(2), 1.0)):
            x = sample_domain(op.domain, self.points, seed=self.seed).points
            jet = reference_jet(op, x)
            worst = max(worst, float((apply_operator(op, jet, x) - value * jet.value).abs().max()))
        return PropertyResult.measure("analytic_ground_states", worst, 1e-10)

    def harmonic_enumeration(self) -> PropertyResult:
        worst = 0.0
        for dim in (1, 2, 3):
            brute = sorted(sum(n * n for n in ns) for ns in itertools.product(range(1, 11), repeat=dim))
            count = 10
            expected = [math.pi**2 * s for s in brute[:count]]
            got = harmonic_eigenvalues(dim, count)
            worst = max(worst, max(abs(a - b) for a, b in zip(got, expected)))
        return PropertyResult.measure("harmonic_enumeration", worst, 0.0)

    def run(self) -> List[PropertyResult]:
        return [self.fokker_planck_zero_mode(), self.ground_states(), self.harmonic_enumeration()]
