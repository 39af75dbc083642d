import math
from typing import Iterator, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.special import gammaln

# Mantissas above this are rescaled into the running log-scale
RESCALE_THRESHOLD = 1e150
LOG_RESCALE_THRESHOLD = math.log(RESCALE_THRESHOLD)

# Below this index P_n(0) is built by exact ratio products
LEGENDRE_PRODUCT_LIMIT = 64


class PolyOrder(BaseModel):
  """
  Degree and superscript of a polynomial. Degree -1 is accepted and evaluates to zero.
  """
  model_config = ConfigDict(frozen=True)

  n: int
  alpha: int = 0

  @field_validator("n")
  @classmethod
  def _degree(cls, v: int) -> int:
    if v < -1:
      raise ValueError(f"polynomial degree must be >= -1, got {v}")
    return v

  @field_validator("alpha")
  @classmethod
  def _superscript(cls, v: int) -> int:
    if v < 0:
      raise ValueError(f"Laguerre superscript must be >= 0, got {v}")
    return v


def laguerre(order: PolyOrder, x: float) -> float:
  """
  Associated Laguerre polynomial L_n^alpha(x) by the three-term recurrence
    (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}
  """
  n, alpha = order.n, order.alpha
  if n < 0:
    return 0.0
  x = float(x)
  previous, current = 1.0, 1.0 + alpha - x
  if n == 0:
    return previous
  for k in range(1, n):
    previous, current = current, ((2 * k + 1 + alpha - x) * current - (k + alpha) * previous) / (k + 1)
  return current


def hermite(n: int, x: float) -> float:
  """Physicists' Hermite polynomial, H_{k+1} = 2x H_k - 2k H_{k-1}."""
  if n < -1:
    raise ValueError(f"Hermite degree must be >= -1, got {n}")
  if n == -1:
    return 0.0
  x = float(x)
  previous, current = 1.0, 2.0 * x
  if n == 0:
    return previous
  for k in range(1, n):
    previous, current = current, 2.0 * x * current - 2.0 * k * previous
  return current


def legendre_p_zero(n: int) -> float:
  """
  P_n(0): zero for odd n, (-1/4)^m C(2m, m) for n = 2m.
  """
  if n < 0:
    raise ValueError(f"Legendre degree must be >= 0, got {n}")
  if n % 2 == 1:
    return 0.0
  m = n // 2
  if m <= LEGENDRE_PRODUCT_LIMIT:
    value = 1.0
    for j in range(1, m + 1):
      value *= -(2 * j - 1) / (2 * j)
    return value
  log_abs = gammaln(2 * m + 1) - 2.0 * gammaln(m + 1) - 2 * m * math.log(2.0)
  return (-1.0) ** m * math.exp(log_abs)


def legendre_p_zero_even(m_max: int) -> np.ndarray:
  """
  Array of P_{2m}(0) for m = 0..m_max, from the ratio P_{2m}(0)/P_{2m-2}(0) = -(2m-1)/(2m).
  """
  m = np.arange(1, m_max + 1, dtype=float)
  ratios = -(2.0 * m - 1.0) / (2.0 * m)
  return np.concatenate([[1.0], np.cumprod(ratios)])


def laguerre_table(x: float, alpha: int, count: int) -> np.ndarray:
  """
  e^{-x/2} L_n^alpha(x) for n = 0 .. count-1 at one scalar x.

  Plain float recurrence: one point over a long index range is faster here
  than the vectorized sweep.
  """
  x = float(x)
  values = np.empty(count)
  log_scale = -0.5 * x
  previous, current = 0.0, 1.0
  for k in range(count):
    if k > 0:
      previous, current = current, ((2 * k - 1 + alpha - x) * current - (k - 1 + alpha) * previous) / k
      if abs(current) > RESCALE_THRESHOLD:
        previous /= RESCALE_THRESHOLD
        current /= RESCALE_THRESHOLD
        log_scale += LOG_RESCALE_THRESHOLD
    values[k] = _unscale(current, log_scale)
  return values


def _unscale(mantissa: float, log_scale: float) -> float:
  if mantissa == 0.0:
    return 0.0
  exponent = log_scale + math.log(abs(mantissa))
  return math.copysign(math.exp(exponent), mantissa) if exponent > -745.0 else 0.0


class LaguerreSweep:
  """
  Iterates e^{-x/2} L_n^alpha(x) for n = 0, 1, 2, ... over an array of x.

  Mantissas are carried with a running log-scale so that neither e^{-x/2}
  underflow nor growth of L_n at large x loses the value.
  """

  def __init__(self, x: Union[float, np.ndarray], alpha: int = 0):
    self.x = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    self.alpha = int(alpha)
    self.n = -1
    self._previous = np.zeros_like(self.x)
    self._current = np.ones_like(self.x)
    self._log_scale = -0.5 * self.x

  def __iter__(self) -> Iterator[np.ndarray]:
    return self

  def __next__(self) -> np.ndarray:
    return self.step()

  def step(self) -> np.ndarray:
    """Advances to the next degree and returns the scaled values."""
    if self.n >= 0:
      k = self.n
      following = ((2 * k + 1 + self.alpha - self.x) * self._current - (k + self.alpha) * self._previous) / (k + 1)
      self._previous, self._current = self._current, following
      large = np.abs(self._current) > RESCALE_THRESHOLD
      if np.any(large):
        self._previous[large] /= RESCALE_THRESHOLD
        self._current[large] /= RESCALE_THRESHOLD
        self._log_scale[large] += LOG_RESCALE_THRESHOLD
    self.n += 1
    return self.value()

  def value(self) -> np.ndarray:
    with np.errstate(under="ignore", divide="ignore"):
      exponent = self._log_scale + np.log(np.abs(self._current))
      return np.where(self._current == 0.0, 0.0, np.sign(self._current) * np.exp(exponent))

  def compress(self, keep: np.ndarray):
    """Drops the points where `keep` is False."""
    self.x = self.x[keep]
    self._previous = self._previous[keep]
    self._current = self._current[keep]
    self._log_scale = self._log_scale[keep]
