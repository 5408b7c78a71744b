# Experiment orchestration and result files.
from .records import ResultRecord, read_results, write_results, write_trace
from .experiment import run_experiment, run_fdm_sweep

__all__ = [
    "ResultRecord",
    "read_results",
    "write_results",
    "write_trace",
    "run_experiment",
    "run_fdm_sweep",
]
