"""
Experiment configuration.

A config file is a JSON object validated by ExperimentConfig. Unknown keys are
rejected by name; defaults that depend on the operator dimension are filled in
after validation. See docs/configuration.md for the key reference.
"""
import json
import logging
import os
import re
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.errors import ConfigError, InvalidInputError
from src.operators.domain import OperatorSpec
from src.training.trainer import Ablation, TrainConfig, default_arch, default_samples

logger = logging.getLogger(__name__)

SAFE_RUN_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")


def default_output_dir() -> str:
    return os.getenv("STNET_OUTPUT_DIR", "results")


def default_max_iters(dim: int) -> int:
    """Desk-scale budgets: a tenth of the full-scale iteration counts."""
    return 40000 if dim <= 2 else 50000


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    operator: Literal["harmonic", "oscillator", "fokker_planck"]
    dim: int = Field(ge=1, le=5)
    run_name: Optional[str] = None
    box: Optional[List[Tuple[float, float]]] = None
    fp_coeffs: Optional[List[float]] = None
    targets: int = Field(default=1, ge=1)
    samples: Optional[int] = Field(default=None, ge=1)
    sigma: float = 0.0
    sigmas: Optional[List[float]] = None
    learning_rate: float = Field(default=1e-4, gt=0)
    eps: float = Field(default=1e-10, gt=0)
    max_iters: Optional[int] = Field(default=None, ge=1)
    xi: float = Field(default=0.1, gt=0)
    seed: int = 0
    arch: Optional[List[int]] = None
    activation: Literal["tanh", "sin"] = "tanh"
    ablation: Ablation = Ablation.FULL
    refresh_period: int = Field(default=1000, ge=1)
    history_every: int = Field(default=100, ge=1)
    max_restarts: int = Field(default=3, ge=0)
    output_dir: str = Field(default_factory=default_output_dir)
    emit_trace: bool = False
    fdm_grids: Optional[List[int]] = None
    fdm_max_bytes: int = Field(default=2 * 1024**3, ge=1)

    @model_validator(mode="after")
    def _resolve_defaults(self) -> "ExperimentConfig":
        if self.run_name is None:
            self.run_name = f"{self.operator}{self.dim}d"
        if not SAFE_RUN_NAME.match(self.run_name):
            raise ValueError(f"run_name '{self.run_name}' is not a filesystem-safe token")
        if self.box is not None and self.operator != "oscillator":
            raise ValueError("box is only configurable for the oscillator")
        if self.box is not None and len(self.box) != self.dim:
            raise ValueError(f"box needs {self.dim} intervals")
        if self.operator == "fokker_planck":
            if self.fp_coeffs is None:
                self.fp_coeffs = [0.5] * self.dim
            if len(self.fp_coeffs) != self.dim:
                raise ValueError(f"fp_coeffs needs {self.dim} entries")
        elif self.fp_coeffs is not None:
            raise ValueError("fp_coeffs only applies to fokker_planck")
        if self.sigmas is not None and len(self.sigmas) != self.targets:
            raise ValueError(f"sigmas needs one entry per target ({self.targets})")
        if self.samples is None:
            self.samples = default_samples(self.dim)
        if self.max_iters is None:
            self.max_iters = default_max_iters(self.dim)
        try:
            op = self.operator_spec()
        except InvalidInputError as exc:
            raise ValueError(str(exc)) from exc
        if self.arch is None:
            self.arch = default_arch(op)
        if self.fdm_grids is not None and any(m < 2 for m in self.fdm_grids):
            raise ValueError("fdm_grids entries must be at least 2")
        return self

    def operator_spec(self) -> OperatorSpec:
        if self.operator == "harmonic":
            return OperatorSpec.harmonic(self.dim)
        if self.operator == "oscillator":
            return OperatorSpec.oscillator(self.dim, self.box)
        return OperatorSpec.fokker_planck(self.fp_coeffs)

    def to_train_config(self) -> TrainConfig:
        return TrainConfig(
            op=self.operator_spec(),
            targets=self.targets,
            samples=self.samples,
            sigma=self.sigma,
            sigmas=self.sigmas,
            eta=self.learning_rate,
            eps=self.eps,
            k_max=self.max_iters,
            xi=self.xi,
            seed=self.seed,
            arch=list(self.arch),
            activation=self.activation,
            ablation=self.ablation,
            refresh_period=self.refresh_period,
            history_every=self.history_every,
            max_restarts=self.max_restarts,
        )

    @property
    def run_dir(self) -> Path:
        return Path(self.output_dir) / self.run_name


def _format_errors(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        key = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{key}: {item['msg']}")
    return "; ".join(lines)


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}", path=str(path))
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})", path=str(path)) from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object", path=str(path))
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]["loc"]
        raise ConfigError(
            f"{path}: {_format_errors(exc)}", key=".".join(str(p) for p in first) or None, path=str(path)
        ) from exc
    logger.info(f"Loaded config {path} (run '{config.run_name}', {config.operator} {config.dim}D).")
    return config
