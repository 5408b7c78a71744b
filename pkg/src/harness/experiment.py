"""
Experiment runner: trains, evaluates and writes one run directory per config.

Failures of a single run or grid are logged and turned into converged=false
rows so that a sweep never aborts halfway.
"""
import logging
import math
import time
from pathlib import Path
from typing import List, Optional

from src.baselines.fdm import fdm_eigenvalues
from src.config import ExperimentConfig
from src.engine.checkpoint import save_checkpoint
from src.harness.records import ResultRecord, write_results, write_trace
from src.operators.analytic import AnalyticSolution, analytic_spectrum, known_count
from src.training.metrics import evaluate_estimates, match_reference
from src.training.trainer import TraceRecord, run_stnet, training_samples

logger = logging.getLogger(__name__)


def _finite(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def reference_spectrum(config: ExperimentConfig) -> AnalyticSolution:
    """Analytic eigenvalues for as many targets as are known."""
    op = config.operator_spec()
    limit = known_count(op)
    count = config.targets if limit is None else min(config.targets, limit)
    return analytic_spectrum(op, count)


def _failed_rows(config: ExperimentConfig, run: str, wall: float) -> List[ResultRecord]:
    return [
        ResultRecord(run=run, operator=config.operator, dim=config.dim, target=i, wall_s=wall, seed=config.seed)
        for i in range(config.targets)
    ]


def run_stnet_records(config: ExperimentConfig, run_dir: Optional[Path] = None) -> List[ResultRecord]:
    """Train, score against the analytic spectrum and write checkpoints/trace."""
    run_dir = config.run_dir if run_dir is None else run_dir
    trace: List[TraceRecord] = []
    start = time.perf_counter()
    try:
        train_config = config.to_train_config()
        estimates = run_stnet(train_config, trace.append if config.emit_trace else None)
    except Exception as e:
        wall = time.perf_counter() - start
        logger.error(f"Run '{config.run_name}' failed: {e}", exc_info=True)
        return _failed_rows(config, config.run_name, wall)
    wall = time.perf_counter() - start
    run_dir.mkdir(parents=True, exist_ok=True)

    samples = training_samples(train_config)
    metrics = evaluate_estimates(estimates, reference_spectrum(config), train_config.op, samples)
    records = []
    for estimate, metric in zip(estimates, metrics):
        save_checkpoint(estimate.params_best.core, run_dir / f"checkpoint_{estimate.target}.stnt")
        records.append(
            ResultRecord(
                run=config.run_name,
                operator=config.operator,
                dim=config.dim,
                target=estimate.target,
                lambda_hat=_finite(estimate.lambda_hat),
                abs_err=_finite(metric.abs_err),
                rel_err=_finite(metric.rel_err),
                residual=_finite(metric.residual),
                iters=estimate.iterations,
                wall_s=wall,
                converged=estimate.converged,
                seed=config.seed,
            )
        )
        logger.info(
            f"{config.run_name} target {estimate.target}: lambda_hat={estimate.lambda_hat:.12g} "
            f"abs_err={metric.abs_err} rel_err={metric.rel_err} residual={metric.residual}"
        )
    if config.emit_trace:
        write_trace(run_dir / "trace.csv", trace)
    return records


def run_fdm_records(config: ExperimentConfig) -> List[ResultRecord]:
    """One row per (grid, target) of the finite-difference baseline."""
    op = config.operator_spec()
    truth = reference_spectrum(config)
    records = []
    for m in config.fdm_grids or []:
        run = f"{config.run_name}:fdm{m}"
        start = time.perf_counter()
        try:
            spectrum = fdm_eigenvalues(op, m, count=config.targets, max_bytes=config.fdm_max_bytes, seed=config.seed)
        except Exception as e:
            logger.error(f"FDM baseline on grid m={m} failed: {e}", exc_info=True)
            records.extend(_failed_rows(config, run, time.perf_counter() - start))
            continue
        wall = time.perf_counter() - start
        consumed = set()
        for target, (value, residual) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals)):
            index = match_reference(value, truth.eigenvalues, consumed)
            abs_err = rel_err = None
            if index is not None:
                reference = truth.eigenvalues[index]
                abs_err = abs(value - reference)
                rel_err = abs_err / abs(reference) if reference != 0.0 else None
            records.append(
                ResultRecord(
                    run=run,
                    operator=config.operator,
                    dim=config.dim,
                    target=target,
                    lambda_hat=_finite(value),
                    abs_err=_finite(abs_err),
                    rel_err=_finite(rel_err),
                    residual=_finite(residual),
                    iters=spectrum.iterations,
                    wall_s=wall,
                    converged=spectrum.converged,
                    seed=config.seed,
                )
            )
        logger.info(f"FDM m={m}: eigenvalues {spectrum.eigenvalues}")
    return records


def run_experiment(config: ExperimentConfig) -> List[ResultRecord]:
    """STNet rows followed by FDM baseline rows, written to <output_dir>/<run_name>/results.csv."""
    run_dir = config.run_dir
    run_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"Starting run '{config.run_name}' in {run_dir}")
    records = run_stnet_records(config, run_dir) + run_fdm_records(config)
    write_results(run_dir / "results.csv", records)
    return records


def run_fdm_sweep(config: ExperimentConfig) -> List[ResultRecord]:
    """Baseline rows only, written to <output_dir>/<run_name>/fdm_results.csv."""
    run_dir = config.run_dir
    run_dir.mkdir(parents=True, exist_ok=True)
    records = run_fdm_records(config)
    write_results(run_dir / "fdm_results.csv", records)
    return records
