"""
Deflation projection and filter transform acting on sampled fields.

With A = L - sum_k lambda_k <., s_k> s_k (deflation) the filter evaluates
p(A) v = A^2 v - 2 lt A v + (lt^2 - xi^2) v for the current estimate lt, i.e.
one quadratic factor (A - (lt - xi))(A - (lt + xi)).
"""
import copy
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import torch

from src.errors import DimensionMismatchError, InvalidInputError, InvariantViolationError, UnsupportedDegreeError
from src.operators.ansatz import AnsatzNet, ansatz_jet
from src.operators.differential import apply_operator, operator_chain
from src.operators.domain import OperatorSpec

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-6


def discrete_inner(u_vals: torch.Tensor, v_vals: torch.Tensor) -> torch.Tensor:
    """Sample mean of u * v."""
    if u_vals.shape != v_vals.shape or u_vals.dim() != 1 or u_vals.numel() == 0:
        raise DimensionMismatchError(f"Cannot pair fields of shapes {tuple(u_vals.shape)} and {tuple(v_vals.shape)}.")
    return torch.dot(u_vals, v_vals) / u_vals.numel()


def discrete_norm(u_vals: torch.Tensor) -> torch.Tensor:
    return torch.sqrt(discrete_inner(u_vals, u_vals))


@dataclass
class SolvedPair:
    """A frozen eigenpair estimate used for deflation."""

    lambda_hat: float
    snapshot: AnsatzNet
    norm: float = 1.0
    values: Optional[torch.Tensor] = None
    op_values: Optional[torch.Tensor] = None
    sample_key: Optional[tuple] = None

    def refresh_cache(self, op: OperatorSpec, samples) -> None:
        """Evaluate the snapshot on `samples` and normalize it to unit discrete norm."""
        if self.sample_key == samples.key and self.values is not None:
            return
        with torch.no_grad():
            jet = ansatz_jet(self.snapshot, samples.points)
            v, Lv = jet.value, apply_operator(op, jet, samples.points)
        norm = float(discrete_norm(v))
        if norm < 1e-14:
            raise InvariantViolationError("Cannot deflate with a snapshot of zero norm.")
        self.norm = norm
        self.values = v / norm
        self.op_values = Lv / norm
        self.sample_key = samples.key


@dataclass
class TransformState:
    solved: List[SolvedPair] = field(default_factory=list)
    xi: float = 0.1
    target_index: int = 0
    lambda_hat: float = 0.0
    deflation_on: bool = True
    filter_on: bool = True
    filter_degree: int = 1

    def __post_init__(self) -> None:
        if not self.xi > 0:
            raise InvalidInputError(f"Filter half-width xi must be positive, got {self.xi}.")

    def install_snapshot(self, lambda_hat: float, net: AnsatzNet, op: OperatorSpec, samples) -> SolvedPair:
        pair = SolvedPair(float(lambda_hat), copy.deepcopy(net))
        pair.refresh_cache(op, samples)
        self.solved.append(pair)
        return pair

    def solved_fields(self, op: OperatorSpec, samples) -> List[Tuple[float, torch.Tensor, torch.Tensor]]:
        if not self.deflation_on:
            return []
        for pair in self.solved:
            pair.refresh_cache(op, samples)
        return [(pair.lambda_hat, pair.values, pair.op_values) for pair in self.solved]


def _check_normalized(s: torch.Tensor) -> None:
    deviation = abs(float(discrete_inner(s, s)) - 1.0)
    if deviation > NORMALIZATION_TOL:
        raise InvariantViolationError(f"Deflation snapshot is not normalized (|<s,s> - 1| = {deviation:.3e}).")


def _deflate(v: torch.Tensor, Lv: torch.Tensor, lambdas: Sequence[float], snapshots: Sequence[torch.Tensor]) -> torch.Tensor:
    out = Lv
    for lam, s in zip(lambdas, snapshots):
        _check_normalized(s)
        out = out - lam * discrete_inner(v, s) * s
    return out


def project_out(v: torch.Tensor, snapshots: Sequence[torch.Tensor]) -> torch.Tensor:
    """v with its components along the unit-norm snapshots removed, one snapshot after the other."""
    out = v
    for s in snapshots:
        out = out - discrete_inner(out, s) * s
    return out


def deflate_values(
    state: TransformState, v_vals: torch.Tensor, Lv_vals: torch.Tensor, solved_vals: Sequence[torch.Tensor]
) -> torch.Tensor:
    """(D_i(L) v)(x_j) = Lv(x_j) - sum_k lambda_k <v, s_k> s_k(x_j)."""
    if len(solved_vals) != len(state.solved):
        raise DimensionMismatchError(f"{len(solved_vals)} snapshot fields for {len(state.solved)} solved pairs.")
    return _deflate(v_vals, Lv_vals, [p.lambda_hat for p in state.solved], solved_vals)


def filtered_values(
    lambda_hat: float,
    xi: float,
    v: torch.Tensor,
    Lv: torch.Tensor,
    L2v: torch.Tensor,
    solved: Sequence[Tuple[float, torch.Tensor, torch.Tensor]] = (),
) -> torch.Tensor:
    """
    p(A) v for the deflated operator A from L v, L^2 v and the solved pairs.

    `solved` holds (lambda_k, s_k, L s_k) with s_k at unit discrete norm.
    A^2 v = L(Av) - sum_k lambda_k <Av, s_k> s_k and L(Av) = L^2 v - sum_k lambda_k <v, s_k> L s_k.
    """
    lambdas = [lam for lam, _, _ in solved]
    snapshots = [s for _, s, _ in solved]
    Av = _deflate(v, Lv, lambdas, snapshots)
    LAv = L2v
    for lam, s, Ls in solved:
        LAv = LAv - lam * discrete_inner(v, s) * Ls
    A2v = _deflate(Av, LAv, lambdas, snapshots)
    return A2v - 2.0 * lambda_hat * Av + (lambda_hat**2 - xi**2) * v


def filter_apply(state: TransformState, op: OperatorSpec, net: AnsatzNet, samples) -> torch.Tensor:
    """Transformed field (p(D_i L) v) on the sample set; falls back to D_i(L) v with the filter off."""
    return transform_values(state, op, net, samples)[2]


def transform_values(
    state: TransformState, op: OperatorSpec, net: AnsatzNet, samples
) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """(v, L v, w) where w is the field the loss normalizes, according to the ablation flags."""
    if state.filter_on and state.filter_degree != 1:
        raise UnsupportedDegreeError(f"Only one quadratic filter factor is supported, got {state.filter_degree}.")
    solved = state.solved_fields(op, samples)
    x = samples.points
    if state.filter_on:
        jet, Lv_jet = operator_chain(op, net, x)
        v, Lv = jet.value, Lv_jet.value
        L2v = apply_operator(op, Lv_jet, x)
        return v, Lv, filtered_values(state.lambda_hat, state.xi, v, Lv, L2v, solved)

    jet = ansatz_jet(net, x)
    v = jet.value
    Lv = apply_operator(op, jet, x)
    if not solved:
        return v, Lv, Lv
    return v, Lv, _deflate(v, Lv, [lam for lam, _, _ in solved], [s for _, s, _ in solved])
