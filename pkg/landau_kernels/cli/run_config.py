import os
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from landau_kernels.kernel3d.constants import MomentMethod
from landau_kernels.kernel3d.field import FieldParams, tesla_to_beta
from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy
from landau_kernels.utilities.config_manager import ConfigManager

THREADS_ENV_VAR = "MOK_THREADS"


class OutputFormat:
  CSV = "csv"
  JSON = "json"

  @classmethod
  def all(cls):
    return [cls.CSV, cls.JSON]


class Command:
  FIG1 = "fig1"
  FIG2 = "fig2"
  FIG3 = "fig3"
  FIG4 = "fig4"
  EVAL = "eval"
  VALIDATE = "validate"

  @classmethod
  def all(cls):
    return [cls.FIG1, cls.FIG2, cls.FIG3, cls.FIG4, cls.EVAL, cls.VALIDATE]


class GridAxis(BaseModel):
  """Uniform axis from `min` to `max` with `steps` nodes."""
  model_config = ConfigDict(frozen=True)

  min: float
  max: float
  steps: int

  @field_validator("steps")
  @classmethod
  def _two_nodes(cls, v: int) -> int:
    if v < 2:
      raise ValueError(f"a grid needs at least 2 steps, got {v}")
    return v

  @classmethod
  def parse(cls, text: str) -> "GridAxis":
    parts = text.split(":")
    if len(parts) != 3:
      raise ValueError(f"grid must look like min:max:steps, got {text!r}")
    return cls(min=float(parts[0]), max=float(parts[1]), steps=int(parts[2]))

  def values(self, avoid_zero: bool = False) -> np.ndarray:
    nodes = np.linspace(self.min, self.max, self.steps)
    if avoid_zero and np.any(nodes == 0.0):
      # Shift by half a step; a degenerate axis moves by half a unit instead
      step = (self.max - self.min) / (self.steps - 1)
      nodes = nodes + (0.5 * step if step != 0 else 0.5)
    return nodes


class RunConfig(BaseModel):
  """
  One CLI invocation. beta and tesla are mutually exclusive; with neither,
  the figure commands sweep their configured defaults.
  """
  command: str
  beta: Optional[float] = None
  tesla: Optional[float] = None
  grids: List[GridAxis] = []
  widths: Optional[List[float]] = None
  term_tol: Optional[float] = None
  n_max: Optional[int] = None
  method: str = MomentMethod.INTEGRAL
  plane: bool = False
  point: List[float] = [0.5, 0.0, 0.5]
  output_path: Optional[str] = None
  output_format: str = OutputFormat.CSV
  threads: int = 1
  quick: bool = False
  log_dir: Optional[str] = None
  perturb_a0: bool = False

  @model_validator(mode="after")
  def _one_field_spec(self) -> "RunConfig":
    if self.beta is not None and self.tesla is not None:
      raise ValueError("give either beta or tesla, not both")
    if self.command not in Command.all():
      raise ValueError(f"Unknown command {self.command}")
    if self.output_format not in OutputFormat.all():
      raise ValueError(f"Unknown output format {self.output_format}")
    if self.threads < 1:
      raise ValueError(f"threads must be >= 1, got {self.threads}")
    return self

  @staticmethod
  def threads_from_env(threads: Optional[int]) -> int:
    if threads is not None:
      return threads
    return int(os.environ.get(THREADS_ENV_VAR, "1"))

  def fixed_beta(self) -> Optional[float]:
    if self.beta is not None:
      return self.beta
    if self.tesla is not None:
      return tesla_to_beta(self.tesla)
    return None

  def betas(self, defaults: List[float]) -> List[float]:
    fixed = self.fixed_beta()
    return [float(b) for b in defaults] if fixed is None else [fixed]

  def field_params(self, beta: float) -> FieldParams:
    return FieldParams(beta=beta)

  def series_policy(self, config_manager: ConfigManager) -> SeriesPolicy:
    return config_manager.series_policy(term_tol=self.term_tol, n_max=self.n_max)

  def quad_config(self, config_manager: ConfigManager) -> QuadConfig:
    return config_manager.quad_config()

  def grid(self, index: int, default: str) -> GridAxis:
    return self.grids[index] if index < len(self.grids) else GridAxis.parse(default)
