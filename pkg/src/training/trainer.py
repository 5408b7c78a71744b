"""
Training loop for several eigenpairs at once.

All targets share one sample set and advance in lockstep: every iteration each
target takes one Adam step on its loss; every `refresh_period` iterations the
transform state of target i is rebuilt from the best estimates of targets < i.
With deflation on, the previous iterate of target i has those estimates
projected out, and a target whose best estimate coincides with one of them
loses its best record at the refresh.
"""
import copy
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence

import torch

from src.errors import DegenerateDirectionError, InvalidInputError, NumericDomainError
from src.engine.gradients import assign_flat_parameters, flat_parameters, loss_param_grad
from src.operators.ansatz import AnsatzNet, ansatz_values, build_ansatz
from src.operators.domain import Boundary, OperatorSpec
from src.training.adam import AdamState, adam_step
from src.training.loss import rayleigh_from_values, stnet_loss
from src.training.metrics import eigen_residual
from src.training.sampling import SampleSet, sample_domain
from src.transforms.function_level import SolvedPair, TransformState, discrete_inner, discrete_norm, project_out

logger = logging.getLogger(__name__)

RESTART_SEED_OFFSET = 1000
# |<best, s_k>| above this at a refresh means the target found a solved eigenpair again
COLLAPSE_OVERLAP = 0.5


class Ablation(str, Enum):
    FULL = "full"
    NO_FILTER = "no_filter"
    NO_DEFLATION = "no_deflation"
    NEITHER = "neither"

    @property
    def deflation_on(self) -> bool:
        return self in (Ablation.FULL, Ablation.NO_FILTER)

    @property
    def filter_on(self) -> bool:
        return self in (Ablation.FULL, Ablation.NO_DEFLATION)


def default_samples(dim: int) -> int:
    return {1: 20000, 2: 40000}.get(dim, 59049)


def default_arch(op: OperatorSpec) -> List[int]:
    width = 20 if op.dim <= 2 else 40
    d_in = 2 * op.dim if op.domain.boundary is Boundary.PERIODIC else op.dim
    return [d_in, width, width, width, width, 1]


@dataclass
class TrainConfig:
    op: OperatorSpec
    targets: int = 1
    samples: Optional[int] = None
    sigma: float = 0.0
    sigmas: Optional[List[float]] = None
    eta: float = 1e-4
    eps: float = 1e-10
    k_max: int = 40000
    xi: float = 0.1
    seed: int = 0
    arch: Optional[List[int]] = None
    activation: str = "tanh"
    ablation: Ablation = Ablation.FULL
    refresh_period: int = 1000
    history_every: int = 100
    max_restarts: int = 3

    def __post_init__(self) -> None:
        if self.samples is None:
            self.samples = default_samples(self.op.dim)
        if self.arch is None:
            self.arch = default_arch(self.op)
        self.ablation = Ablation(self.ablation)
        if self.targets < 1:
            raise InvalidInputError(f"Need at least one target eigenvalue, got {self.targets}.")
        if self.samples < 1:
            raise InvalidInputError(f"Need at least one sample point, got {self.samples}.")
        if not self.eta > 0:
            raise InvalidInputError(f"Learning rate must be positive, got {self.eta}.")
        if self.refresh_period < 1 or self.history_every < 1:
            raise InvalidInputError("refresh_period and history_every must be at least 1.")
        if self.sigmas is not None and len(self.sigmas) != self.targets:
            raise InvalidInputError(f"{len(self.sigmas)} initial shifts given for {self.targets} targets.")

    def initial_shift(self, i: int) -> float:
        return float(self.sigmas[i]) if self.sigmas is not None else float(self.sigma)


@dataclass
class HistoryPoint:
    iteration: int
    loss: float
    lambda_hat: float
    best_loss: float


@dataclass
class TraceRecord:
    iteration: int
    target: int
    loss: float
    lambda_hat: float


@dataclass
class EigenPairEstimate:
    target: int
    lambda_hat: float
    params_best: Optional[AnsatzNet]
    eps_i: float
    residual: float
    history: List[HistoryPoint] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    restarts: int = 0


@dataclass
class _Target:
    net: AnsatzNet
    adam: AdamState
    prev: torch.Tensor
    lambda_hat: float
    best_flat: torch.Tensor
    eps_i: float = math.inf
    restarts: int = 0
    history: List[HistoryPoint] = field(default_factory=list)

    def best_net(self) -> AnsatzNet:
        net = copy.deepcopy(self.net)
        assign_flat_parameters(net.core, self.best_flat)
        return net


def training_samples(config: TrainConfig) -> SampleSet:
    return sample_domain(config.op.domain, config.samples, config.seed)


def _normalized(v: torch.Tensor, target: int) -> torch.Tensor:
    norm = float(discrete_norm(v))
    if norm < 1e-14:
        raise DegenerateDirectionError(f"Network of target {target} vanishes on the sample set.", target=target)
    return v / norm


def _start_target(config: TrainConfig, i: int, samples: SampleSet, restarts: int = 0) -> _Target:
    seed = config.seed + 1 + i + RESTART_SEED_OFFSET * restarts
    net = build_ansatz(config.op, config.arch, config.activation, seed)
    with torch.no_grad():
        prev = _normalized(ansatz_values(net, samples.points), i)
    flat = flat_parameters(net.core)
    return _Target(net, AdamState.zeros_like(flat), prev, config.initial_shift(i), flat, restarts=restarts)


def _solved_snapshots(config: TrainConfig, state: TransformState, samples: SampleSet) -> List[torch.Tensor]:
    return [s for _, s, _ in state.solved_fields(config.op, samples)]


def _next_iterate(v: torch.Tensor, snapshots: Sequence[torch.Tensor], target: int) -> torch.Tensor:
    """Normalized v with the solved directions removed, as in deflated inverse iteration."""
    return _normalized(project_out(v, snapshots), target)


def _collapsed(t: _Target, snapshots: Sequence[torch.Tensor], samples: SampleSet) -> bool:
    if not snapshots or not math.isfinite(t.eps_i):
        return False
    with torch.no_grad():
        best = ansatz_values(t.best_net(), samples.points)
    norm = float(discrete_norm(best))
    if norm < 1e-14:
        return True
    return max(abs(float(discrete_inner(best, s))) / norm for s in snapshots) > COLLAPSE_OVERLAP


def _refresh(config: TrainConfig, states: List[TransformState], targets: List[_Target], samples: SampleSet) -> None:
    pairs: List[SolvedPair] = []
    if config.ablation.deflation_on:
        for t in targets[:-1]:
            pair = SolvedPair(t.lambda_hat, t.best_net())
            pair.refresh_cache(config.op, samples)
            pairs.append(pair)
    for i, state in enumerate(states):
        state.solved = pairs[:i]
        snapshots = _solved_snapshots(config, state, samples)
        t = targets[i]
        if _collapsed(t, snapshots, samples):
            # the filter keeps its center: the deflated eigenvalue 0 must stay off its roots
            logger.warning(
                f"Target {i} settled on an already solved eigenpair (lambda_hat={t.lambda_hat:.8g}); "
                f"dropping its best record."
            )
            t.eps_i = math.inf
            t.best_flat = flat_parameters(t.net.core)
        state.lambda_hat = t.lambda_hat
        if snapshots:
            t.prev = _next_iterate(t.prev, snapshots, i)
    logger.info(f"Refreshed transforms: lambda_hat = {[round(t.lambda_hat, 8) for t in targets]}")


def _step(
    config: TrainConfig,
    i: int,
    target: _Target,
    state: TransformState,
    samples: SampleSet,
    k: int,
    trace: Optional[Callable[[TraceRecord], None]],
) -> None:
    holder = {}

    def closure() -> torch.Tensor:
        holder["evaluation"] = stnet_loss(i, target.net, target.prev, state, config.op, samples)
        return holder["evaluation"].terms

    loss, grad = loss_param_grad(closure, target.net.core)
    evaluation = holder["evaluation"]
    v, Lv = evaluation.v.detach(), evaluation.Lv.detach()

    if loss < target.eps_i:
        target.eps_i = loss
        target.lambda_hat = rayleigh_from_values(v, Lv)
        target.best_flat = flat_parameters(target.net.core)

    updated = adam_step(flat_parameters(target.net.core), grad, target.adam, config.eta)
    assign_flat_parameters(target.net.core, updated)
    target.prev = _next_iterate(v, _solved_snapshots(config, state, samples), i)

    if k == 1 or k % config.history_every == 0:
        target.history.append(HistoryPoint(k, loss, target.lambda_hat, target.eps_i))
        if trace is not None:
            trace(TraceRecord(k, i, loss, target.lambda_hat))
        logger.debug(f"iter {k} target {i}: loss={loss:.3e} lambda_hat={target.lambda_hat:.10g}")


def run_stnet(
    config: TrainConfig, trace: Optional[Callable[[TraceRecord], None]] = None
) -> List[EigenPairEstimate]:
    """Train `config.targets` eigenpairs and return the best estimate for each."""
    samples = training_samples(config)
    logger.info(
        f"Training {config.targets} eigenpair(s) of the {config.op.kind.value} operator in {config.op.dim}D "
        f"(N={config.samples}, arch={config.arch}, ablation={config.ablation.value}, k_max={config.k_max})."
    )
    targets = [_start_target(config, i, samples) for i in range(config.targets)]
    states = [
        TransformState(
            xi=config.xi,
            target_index=i,
            lambda_hat=config.initial_shift(i),
            deflation_on=config.ablation.deflation_on,
            filter_on=config.ablation.filter_on,
        )
        for i in range(config.targets)
    ]

    k = 0
    for k in range(1, config.k_max + 1):
        for i in range(config.targets):
            try:
                _step(config, i, targets[i], states[i], samples, k, trace)
            except DegenerateDirectionError as exc:
                restarts = targets[i].restarts + 1
                if restarts > config.max_restarts:
                    raise DegenerateDirectionError(
                        f"Target {i} degenerated {restarts} times; giving up.", target=i, iteration=k
                    ) from exc
                logger.warning(f"Target {i} degenerated at iteration {k}; restart {restarts} with a fresh seed.")
                targets[i] = _start_target(config, i, samples, restarts)
            except NumericDomainError as exc:
                exc.target, exc.iteration = i, k
                raise
        if all(t.eps_i < config.eps for t in targets):
            logger.info(f"All targets reached loss < {config.eps:g} at iteration {k}.")
            break
        if k % config.refresh_period == 0:
            _refresh(config, states, targets, samples)

    estimates = []
    for i, t in enumerate(targets):
        best = t.best_net()
        converged = t.eps_i < config.eps
        if not converged:
            logger.warning(f"Target {i} did not reach loss < {config.eps:g} (best {t.eps_i:.3e}) in {k} iterations.")
        estimates.append(
            EigenPairEstimate(
                target=i,
                lambda_hat=t.lambda_hat,
                params_best=best,
                eps_i=t.eps_i,
                residual=eigen_residual(best, config.op, samples, t.lambda_hat),
                history=t.history,
                iterations=k,
                converged=converged,
                restarts=t.restarts,
            )
        )
    logger.info(f"Finished after {k} iterations: lambda_hat = {[e.lambda_hat for e in estimates]}")
    return estimates
