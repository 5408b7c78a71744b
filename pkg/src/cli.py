import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional

from dotenv import load_dotenv

from src.config import ExperimentConfig, parse_config
from src.errors import ConfigError, SpectralError
from src.harness.experiment import run_experiment, run_fdm_sweep
from src.harness.records import ResultRecord
from src.operators.analytic import analytic_spectrum, known_count
from src.validation_suite import ValidationSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3


def _load_configs(args) -> List[ExperimentConfig]:
    configs = []
    for path in args.configs:
        config = parse_config(path)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.output_dir is not None:
            overrides["output_dir"] = args.output_dir
        if getattr(args, "trace", False):
            overrides["emit_trace"] = True
        configs.append(config.model_copy(update=overrides))
    return configs


def _run_all(runner: Callable[[ExperimentConfig], List[ResultRecord]], configs, parallel: bool) -> List[List[ResultRecord]]:
    if parallel and len(configs) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(runner, configs))
    return [runner(config) for config in configs]


def _report(all_records: List[List[ResultRecord]]) -> int:
    failed = False
    for records in all_records:
        for r in records:
            print(f"{r.run} target={r.target} lambda_hat={r.lambda_hat} rel_err={r.rel_err} "
                  f"abs_err={r.abs_err} converged={r.converged}")
            failed = failed or r.lambda_hat is None
    return EXIT_NUMERIC if failed else EXIT_OK


def solve_command(args) -> int:
    """Handles the 'solve' command: trains every config and writes its run directory."""
    return _report(_run_all(run_experiment, _load_configs(args), args.parallel))


def fdm_command(args) -> int:
    """Handles the 'fdm' command: finite-difference baseline sweep only."""
    configs = _load_configs(args)
    for config in configs:
        if not config.fdm_grids:
            logger.warning(f"Config '{config.run_name}' has no fdm_grids; nothing to sweep.")
    return _report(_run_all(run_fdm_sweep, configs, args.parallel))


def validate_command(args) -> int:
    """Handles the 'validate' command: one line per property (name, status, worst error, tolerance)."""
    results = ValidationSuite().run()
    for result in results:
        print(result.report_line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def spectrum_command(args) -> int:
    """Handles the 'spectrum' command: prints the analytic eigenvalues for the config's operator."""
    config = parse_config(args.config)
    op = config.operator_spec()
    limit = known_count(op)
    count = config.targets if limit is None else min(config.targets, limit)
    if count < config.targets:
        logger.warning(f"Only {count} eigenvalue(s) of the {config.operator} operator are known analytically.")
    for value in analytic_spectrum(op, count).eigenvalues:
        print(repr(value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Spectral transformation network eigenvalue solver.")
    parser.add_argument("--log-level", default=None, help="Logging level (default: $STNET_LOG_LEVEL or INFO).")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    subparsers.required = True

    def add_run_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("configs", nargs="+", help="One or more JSON config files.")
        sub.add_argument("--seed", type=int, default=None, help="Override the seed of every config.")
        sub.add_argument("--output-dir", default=None, help="Override the output directory of every config.")
        sub.add_argument("--parallel", action="store_true", help="Run independent configs in a process pool.")

    solve_parser = subparsers.add_parser("solve", help="Train eigenpairs and write results.csv per run.")
    add_run_flags(solve_parser)
    solve_parser.add_argument("--trace", action="store_true", help="Also write trace.csv.")
    solve_parser.set_defaults(func=solve_command)

    fdm_parser = subparsers.add_parser("fdm", help="Run the finite-difference baseline sweep.")
    add_run_flags(fdm_parser)
    fdm_parser.set_defaults(func=fdm_command)

    validate_parser = subparsers.add_parser("validate", help="Run the property suites.")
    validate_parser.set_defaults(func=validate_command)

    spectrum_parser = subparsers.add_parser("spectrum", help="Print the analytic spectrum of a config's operator.")
    spectrum_parser.add_argument("config", help="JSON config file.")
    spectrum_parser.set_defaults(func=spectrum_command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function for the CLI."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or os.getenv("STNET_LOG_LEVEL", "INFO")).upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except SpectralError as e:
        logger.error(f"Numeric failure: {e}", exc_info=True)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
