import math
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from landau_kernels.kernel3d.constants import SCHWINGER_FIELD_TESLA


def tesla_to_beta(tesla: float) -> float:
  if not tesla > 0:
    raise ValueError(f"field must be positive, got {tesla} T")
  return tesla / SCHWINGER_FIELD_TESLA


class FieldParams(BaseModel):
  """
  Uniform magnetic field in natural units (lambda_c = 1, energies in m c^2).

  beta = B / B0 fixes every derived scale: the magnetic length L = 1/sqrt(beta),
  eta = sqrt(2 beta), the cyclotron frequency omega = sqrt(2)/L and the Landau
  energies a_n = sqrt(1 + eta^2 n). With nonrelativistic=True every a_n is 1.
  """
  model_config = ConfigDict(frozen=True)

  beta: float
  nonrelativistic: bool = False

  @field_validator("beta")
  @classmethod
  def _positive_beta(cls, v: float) -> float:
    if not v > 0 or not math.isfinite(v):
      raise ValueError(f"beta must be positive and finite, got {v}")
    return v

  @classmethod
  def from_tesla(cls, tesla: float, **kwargs) -> "FieldParams":
    return cls(beta=tesla_to_beta(tesla), **kwargs)

  @property
  def L(self) -> float:
    return 1.0 / math.sqrt(self.beta)

  @property
  def L2(self) -> float:
    return 1.0 / self.beta

  @property
  def eta(self) -> float:
    return math.sqrt(2.0 * self.beta)

  @property
  def eta2(self) -> float:
    return 2.0 * self.beta

  @property
  def omega(self) -> float:
    return math.sqrt(2.0) / self.L

  def a(self, n: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    if self.nonrelativistic:
      return np.ones_like(n, dtype=float) if np.ndim(n) > 0 else 1.0
    if np.ndim(n) > 0:
      return np.sqrt(1.0 + self.eta2 * np.asarray(n, dtype=float))
    if n < 0:
      raise ValueError(f"Landau index must be >= 0, got {n}")
    return math.sqrt(1.0 + self.eta2 * n)

  def landau_scale(self, n: int) -> "LandauScale":
    return LandauScale(n=n, a_n=self.a(n))


class LandauScale(BaseModel):
  model_config = ConfigDict(frozen=True)

  n: int
  a_n: float

  @field_validator("n")
  @classmethod
  def _index(cls, v: int) -> int:
    if v < 0:
      raise ValueError(f"Landau index must be >= 0, got {v}")
    return v


class Point3(BaseModel):
  """A point r = (x, y, z) with the kernel's second argument fixed at the origin."""
  model_config = ConfigDict(frozen=True)

  x: float
  y: float
  z: float

  @property
  def zeta(self) -> float:
    return self.z

  def rho_bar_sq(self, fp: FieldParams) -> float:
    return (self.x ** 2 + self.y ** 2) / (2.0 * fp.L2)

  def chi(self, fp: FieldParams) -> float:
    return self.x * self.y / (2.0 * fp.L2)

  def r10(self, fp: FieldParams) -> complex:
    return complex(-self.y, -self.x) / (fp.L * math.sqrt(2.0))

  def r01(self, fp: FieldParams) -> complex:
    return complex(self.y, -self.x) / (fp.L * math.sqrt(2.0))
