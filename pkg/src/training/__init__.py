# Sampling, optimizer, loss and the multi-target training loop.
from .sampling import SampleSet, boundary_points, sample_domain
from .adam import AdamState, adam_step
from .loss import LossEvaluation, normalized_loss_terms, rayleigh_from_values, rayleigh_quotient, stnet_loss
from .metrics import ErrorMetrics, eigen_residual, error_metrics, evaluate_estimates
from .trainer import (
    Ablation,
    EigenPairEstimate,
    HistoryPoint,
    TraceRecord,
    TrainConfig,
    default_arch,
    default_samples,
    run_stnet,
    training_samples,
)

__all__ = [
    "SampleSet",
    "boundary_points",
    "sample_domain",
    "AdamState",
    "adam_step",
    "LossEvaluation",
    "normalized_loss_terms",
    "rayleigh_from_values",
    "rayleigh_quotient",
    "stnet_loss",
    "ErrorMetrics",
    "eigen_residual",
    "error_metrics",
    "evaluate_estimates",
    "Ablation",
    "EigenPairEstimate",
    "HistoryPoint",
    "TraceRecord",
    "TrainConfig",
    "default_arch",
    "default_samples",
    "run_stnet",
    "training_samples",
]
