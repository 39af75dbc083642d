from dataclasses import dataclass
from typing import List, Union

from pydantic import BaseModel, ConfigDict, field_validator

Number = Union[float, complex]


class SeriesPolicy(BaseModel):
  """
  Truncation rule for Landau-level sums: stop after `consecutive_below` successive
  terms with |term| < term_tol, or at n_max with the truncation flag raised.
  """
  model_config = ConfigDict(frozen=True)

  term_tol: float = 1e-6
  n_max: int = 1_000_000
  consecutive_below: int = 3

  @field_validator("term_tol")
  @classmethod
  def _positive_tol(cls, v: float) -> float:
    if not v > 0:
      raise ValueError(f"term_tol must be positive, got {v}")
    return v

  @field_validator("n_max", "consecutive_below")
  @classmethod
  def _at_least_one(cls, v: int) -> int:
    if v < 1:
      raise ValueError(f"must be >= 1, got {v}")
    return v

  def tightened(self, factor: float) -> "SeriesPolicy":
    return self.model_copy(update={"term_tol": self.term_tol / factor})


class QuadConfig(BaseModel):
  model_config = ConfigDict(frozen=True)

  rel_tol: float = 1e-10
  abs_tol: float = 1e-14
  # Maximum number of adaptive subdivisions handed to QUADPACK
  max_depth: int = 50
  # Oscillatory integrals: number of sine lobes fed to the accelerator
  max_lobes: int = 64
  abel_tol: float = 1e-10
  # Damping ladder of the e^{-eps k} extrapolation oracle, in units of |zeta|
  damping_ladder: List[float] = [0.1, 0.05, 0.025, 0.0125, 0.00625]

  @field_validator("rel_tol", "abs_tol", "abel_tol")
  @classmethod
  def _positive(cls, v: float) -> float:
    if not v > 0:
      raise ValueError(f"tolerances must be positive, got {v}")
    return v

  @field_validator("max_depth", "max_lobes")
  @classmethod
  def _at_least_one(cls, v: int) -> int:
    if v < 1:
      raise ValueError(f"must be >= 1, got {v}")
    return v


@dataclass(frozen=True)
class QuadResult:
  value: Number
  error: float


@dataclass(frozen=True)
class SeriesResult:
  value: Number
  terms_used: int
  truncated: bool
  error: float = 0.0
