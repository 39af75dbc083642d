import functools
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import special

from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.quad.datamodel import QuadConfig
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, integrate_finite, integrate_halfline

PI_34 = math.pi ** 0.75


class GaussianSpec(BaseModel):
  """
  Initial function f(r) (component `component` of the spinor) with
  f(r) = exp(-r^2 / (2 d^2)) / (pi^{3/4} d^{3/2}), normalized to 1.
  """
  model_config = ConfigDict(frozen=True)

  d: float
  component: int = 2

  @field_validator("d")
  @classmethod
  def _positive_width(cls, v: float) -> float:
    if not v > 0:
      raise ValueError(f"width d must be positive, got {v}")
    return v

  @field_validator("component")
  @classmethod
  def _spinor_index(cls, v: int) -> int:
    if v not in (1, 2, 3, 4):
      raise ValueError(f"component must be in 1..4, got {v}")
    return v

  @property
  def z_g(self) -> float:
    """Variance of the initial function, 3 d^2 / 2."""
    return 1.5 * self.d ** 2


def f(x: float, y: float, z: float, d: float) -> float:
  return math.exp(-(x * x + y * y + z * z) / (2.0 * d * d)) / (PI_34 * d ** 1.5)


def f_z_gaussian(z: float, d: float) -> float:
  return math.exp(-z * z / (2.0 * d * d)) / (math.pi ** 0.25 * math.sqrt(d))


def f_rho_gaussian(x: float, y: float, d: float) -> float:
  return math.exp(-(x * x + y * y) / (2.0 * d * d)) / (math.sqrt(math.pi) * d)


@functools.lru_cache(maxsize=4096)
def _f_z_cached(z: float, d: float, a_n: float, weight: str, rel_tol: float, abs_tol: float, max_depth: int) -> float:
  cfg = QuadConfig(rel_tol=rel_tol, abs_tol=abs_tol, max_depth=max_depth)
  # Real and imaginary parts of (1 - ik) e^{ikz} pair into cos(kz) + k sin(kz)
  if weight == "d1_minus_i_d3":
    integrand = lambda k: (math.cos(k * z) + k * math.sin(k * z)) * math.exp(-0.5 * k * k * d * d) / math.sqrt(a_n * a_n + k * k)
  else:
    integrand = lambda k: math.cos(k * z) * math.exp(-0.5 * k * k * d * d) / math.sqrt(a_n * a_n + k * k)
  value = integrate_halfline(integrand, decay_scale=math.sqrt(2.0) / d, cfg=cfg).value
  return math.sqrt(2.0 * d) / (2.0 * PI_34) * 2.0 * value


def f_z(z: float, d: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> complex:
  """
  F_z(z) = sqrt(2d) / (2 pi^{3/4}) int (1 - ik) (1 + k^2)^{-1/2} e^{-k^2 d^2/2 + ikz} dk.

  The even part of the integrand is real and the odd part is
  -ik * i sin(kz) = k sin(kz), also real: F_z is real for real z.
  """
  if not d > 0:
    raise ValueError(f"width d must be positive, got {d}")
  return complex(_f_z_cached(float(z), float(d), 1.0, "d1_minus_i_d3", cfg.rel_tol, cfg.abs_tol, cfg.max_depth), 0.0)


def f_z_level(z: float, d: float, a_n: float, weight: str, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """
  z-parts of the n-th Landau term of the transformed function:
    weight "d1_minus_i_d3": sqrt(2d)/(2 pi^{3/4}) int (1 - ik) e^{-k^2 d^2/2 + ikz} / sqrt(a_n^2 + k^2) dk
    weight "d2":            the same with (1 - ik) replaced by 1 (the eta factor is applied by the caller)
  """
  return _f_z_cached(float(z), float(d), float(a_n), weight, cfg.rel_tol, cfg.abs_tol, cfg.max_depth)


class RhoCoefficients(BaseModel):
  """F_rho = prefactor * exp(-ax2 x^2 - ay2 y^2 + i b2 x y)"""
  prefactor: float
  ax2: float
  ay2: float
  b2: float


def rho_coefficients(d: float, L: float) -> RhoCoefficients:
  q = d ** 4 + 2.0 * d * d * L * L + 2.0 * L ** 4
  return RhoCoefficients(
    prefactor=2.0 * math.sqrt(2.0 * math.pi) * d / math.sqrt(q),
    ax2=(d * d + L * L) / (2.0 * q),
    ay2=(d ** 4 + d * d * L * L + L ** 4) / (2.0 * L * L * q),
    b2=(d * d + L * L) / q
  )


def f_rho_closed(x: float, y: float, d: float, fp: FieldParams) -> complex:
  c = rho_coefficients(d, fp.L)
  return c.prefactor * complex(math.cos(c.b2 * x * y), math.sin(c.b2 * x * y)) * math.exp(-c.ax2 * x * x - c.ay2 * y * y)


def f_rho_numeric(x: float, y: float, d: float, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> complex:
  """
  (1 / (sqrt(pi) d L^2)) int exp(-|rho - rho2|^2 / (4 L^2) + i chi) exp(-rho2^2 / (2 d^2)) d^2 rho2,
  chi = (x - x2)(y + y2) / (2 L^2), as an iterated quadrature.
  """
  L2 = fp.L2
  # The product of the two Gaussians is negligible beyond this distance from its center
  reach = 10.0 * math.sqrt(2.0 * L2 * d * d / (d * d + 2.0 * L2)) + 1e-12
  center_x = x * d * d / (d * d + 2.0 * L2)
  center_y = y * d * d / (d * d + 2.0 * L2)

  def inner(y2: float) -> complex:
    return integrate_finite(
      lambda x2: complex(math.cos((x - x2) * (y + y2) / (2.0 * L2)), math.sin((x - x2) * (y + y2) / (2.0 * L2)))
      * math.exp(-((x - x2) ** 2 + (y - y2) ** 2) / (4.0 * L2) - (x2 * x2 + y2 * y2) / (2.0 * d * d)),
      center_x - reach, center_x + reach, cfg=cfg
    ).value

  outer = integrate_finite(inner, center_y - reach, center_y + reach, cfg=cfg).value
  return complex(outer) / (math.sqrt(math.pi) * d * L2)


def f_rho_moments(d: float, fp: FieldParams) -> Tuple[float, float, float, float]:
  """
  Overlaps of the transverse parts, all real:
    b0 = int f_rho F_rho,  b2 = int rho^2 f_rho F_rho,
    c0 = int |F_rho|^2,    c2 = int rho^2 |F_rho|^2
  """
  c = rho_coefficients(d, fp.L)
  p = c.ax2 + 0.5 / (d * d)
  q = c.ay2 + 0.5 / (d * d)
  det = 4.0 * p * q + c.b2 ** 2
  b0 = c.prefactor / (math.sqrt(math.pi) * d) * 2.0 * math.pi / math.sqrt(det)
  b2 = b0 * (2.0 * p + 2.0 * q) / det
  c0 = c.prefactor ** 2 * math.pi / (2.0 * math.sqrt(c.ax2 * c.ay2))
  c2 = c0 * (0.25 / c.ax2 + 0.25 / c.ay2)
  return b0, b2, c0, c2


def f_z_level_overlaps(d: float, a: np.ndarray, eta: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
  """
  Closed-form z-overlaps of the Landau terms, through Parseval:
    int f_z F1_n = (d / sqrt(pi)) e^{a_n^2 d^2 / 2} K0(a_n^2 d^2 / 2)
    int F1_n^2  = 1 - (a_n^2 - 1) t_n,   int F2_n^2 = eta^2 t_n
  with t_n = sqrt(pi) d erfcx(a_n d) / a_n.
  """
  a = np.asarray(a, dtype=float)
  t = math.sqrt(math.pi) * d * special.erfcx(a * d) / a
  overlap = d / math.sqrt(math.pi) * special.k0e(0.5 * a * a * d * d)
  return overlap, 1.0 - (a * a - 1.0) * t, eta * eta * t


def landau_weights(d: float, L: float, count: int) -> np.ndarray:
  """
  Weights P_n of f_rho in the Landau levels n < count, summing to 1 over all n.

  With u = L^2 / (2 d^2) + d^2 / (2 L^2) and v = L^2 / (2 d^2) the generating
  function is sum_n P_n s^n = P_0 (1 - alpha s)^{-1/2} (1 - beta s)^{-1/2},
  alpha = (2u - 1) / (2u + 1), beta = (2v - 1) / (2v + 1), P_0 = 2 / sqrt((1 + 2u)(1 + 2v)).
  """
  if count < 1:
    raise ValueError(f"count must be positive, got {count}")
  u = L * L / (2.0 * d * d) + d * d / (2.0 * L * L)
  v = L * L / (2.0 * d * d)
  k = np.arange(count)
  # binomial(2k, k) / 4^k
  central = np.concatenate([[1.0], np.cumprod((2.0 * k[1:] - 1.0) / (2.0 * k[1:]))])
  alpha = (2.0 * u - 1.0) / (2.0 * u + 1.0)
  beta = (2.0 * v - 1.0) / (2.0 * v + 1.0)
  p0 = 2.0 / math.sqrt((1.0 + 2.0 * u) * (1.0 + 2.0 * v))
  return p0 * np.convolve(central * alpha ** k, central * beta ** k)[:count]
