import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from landau_kernels.kernel3d.constants import KernelSign, SeriesVariant
from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.kernel3d.kernel_matrix import KernelMatrix, sign_prefactor
from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy, SeriesResult
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, integrate_halfline
from landau_kernels.quad.series import DEFAULT_ABEL_SIGMAS, DEFAULT_SERIES_POLICY, abel_richardson_sum
from landau_kernels.special.polynomials import laguerre_table
from landau_kernels.utilities.errors import DomainError


class Point2(BaseModel):
  """A point rho = (x, y) in the plane, second kernel argument at the origin."""
  model_config = ConfigDict(frozen=True)

  x: float
  y: float

  def rho_bar_sq(self, fp: FieldParams) -> float:
    return (self.x ** 2 + self.y ** 2) / (2.0 * fp.L2)

  def chi(self, fp: FieldParams) -> float:
    return self.x * self.y / (2.0 * fp.L2)

  def r10(self, fp: FieldParams) -> complex:
    return complex(-self.y, -self.x) / (fp.L * math.sqrt(2.0))

  def r01(self, fp: FieldParams) -> complex:
    return complex(self.y, -self.x) / (fp.L * math.sqrt(2.0))


@dataclass(frozen=True)
class GValues:
  g1: complex
  g2: complex
  g1_t: complex
  g2_t: complex
  truncated: bool = False
  terms_used: int = 0


def _check_relativistic(fp: FieldParams):
  if fp.nonrelativistic:
    raise DomainError("2D kernel elements need the relativistic Landau energies")


def _phase(p: Point2, fp: FieldParams) -> complex:
  return cmath.exp(1j * p.chi(fp)) / fp.L2


# Series forms

def _energies(fp: FieldParams, count: int, variant: str) -> np.ndarray:
  shift = 1 if variant == SeriesVariant.TILDE else 0
  return fp.a(np.arange(shift, count + shift))


def abel_sigmas(x: float, fp: FieldParams) -> tuple:
  """
  Abel damping ladder for the Landau sums at Laguerre argument x.

  The damped sum responds to sigma on the scale min(x, beta) and picks up a
  piece of order exp(-x / sigma), so the ladder starts well below both.
  """
  top = min(DEFAULT_ABEL_SIGMAS[0], x / 20.0, fp.beta / 2.0)
  return tuple(top / 2.0 ** k for k in range(len(DEFAULT_ABEL_SIGMAS)))


def _landau_series(terms: np.ndarray, policy: SeriesPolicy, x: float, fp: FieldParams) -> SeriesResult:
  # Terms fall off like n^{-3/4} or slower, so a magnitude stopping rule cannot be trusted
  if x == 0.0:
    logging.warning(f"[kernel2d] series diverges at rho = 0, returning the partial sum of {len(terms)} terms")
    return SeriesResult(value=float(np.sum(terms)), terms_used=len(terms), truncated=True, error=math.inf)
  sigmas = abel_sigmas(x, fp)
  result = abel_richardson_sum(terms, sigmas)
  # Abel weights exp(-sigma n) must have died out within the available terms
  tail = math.exp(-min(sigmas) * len(terms))
  truncated = result.truncated or tail > policy.term_tol
  if truncated:
    logging.warning(f"[kernel2d] Abel-Richardson sum over {len(terms)} terms not converged (tail weight {tail:.3g})")
  return SeriesResult(value=result.value, terms_used=len(terms), truncated=truncated, error=result.error)


def g1_series(
  p: Point2,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  variant: str = SeriesVariant.PLAIN
) -> SeriesResult:
  """
  G1 = e^{-rho^2/2 + i chi} / L^2 sum_n L_n(rho^2) / a_n, or with a_{n+1} for the tilde.

  The sum converges slowly and is always summed by Abel means on the ladder
  from abel_sigmas, flagged truncated when the smallest damping has not died out
  within policy.n_max terms. At rho = 0 it diverges and the partial sum comes back truncated.
  """
  _check_relativistic(fp)
  x = p.rho_bar_sq(fp)
  terms = laguerre_table(x, 0, policy.n_max) / _energies(fp, policy.n_max, variant)
  result = _landau_series(terms, policy, x, fp)
  return SeriesResult(value=_phase(p, fp) * result.value, terms_used=result.terms_used, truncated=result.truncated, error=result.error)


def g2_series(
  p: Point2,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  variant: str = SeriesVariant.PLAIN
) -> SeriesResult:
  """
  G2 = eta r10 e^{-rho^2/2 + i chi} / L^2 sum_{n>=1} L^1_{n-1}(rho^2) / a_n.
  The tilde element uses r01 in place of r10 and the same sum.
  """
  _check_relativistic(fp)
  shift = p.r01(fp) if variant == SeriesVariant.TILDE else p.r10(fp)
  if shift == 0:
    return SeriesResult(value=0j, terms_used=0, truncated=False)
  x = p.rho_bar_sq(fp)
  terms = laguerre_table(x, 1, policy.n_max) / fp.a(np.arange(1, policy.n_max + 1))
  result = _landau_series(terms, policy, x, fp)
  return SeriesResult(value=fp.eta * shift * _phase(p, fp) * result.value, terms_used=result.terms_used, truncated=result.truncated, error=result.error)


def g_series_values(p: Point2, fp: FieldParams, policy: SeriesPolicy = DEFAULT_SERIES_POLICY) -> GValues:
  results = [
    g1_series(p, fp, policy),
    g2_series(p, fp, policy),
    g1_series(p, fp, policy, variant=SeriesVariant.TILDE),
    g2_series(p, fp, policy, variant=SeriesVariant.TILDE)
  ]
  return GValues(
    g1=complex(results[0].value),
    g2=complex(results[1].value),
    g1_t=complex(results[2].value),
    g2_t=complex(results[3].value),
    truncated=any(r.truncated for r in results),
    terms_used=max(r.terms_used for r in results)
  )


# Integral forms

def _generating_integrand(x: float, eta2: float, power: int, t_power: int) -> Callable[[float], float]:
  """
  q -> t^t_power (1 - t)^{-power} exp(-q^2 - x (1 + t) / (2 (1 - t))), t = exp(-eta^2 q^2).
  The e^{-x/2} prefactor of the kernel element is folded into the exponent.
  """
  def integrand(q: float) -> float:
    u = eta2 * q * q
    one_minus_t = -math.expm1(-u)
    if one_minus_t <= 0.0:
      return 0.0
    t = 1.0 - one_minus_t
    exponent = -q * q - 0.5 * x * (1.0 + t) / one_minus_t - power * math.log(one_minus_t) - t_power * u
    return math.exp(exponent) if exponent > -745.0 else 0.0
  return integrand


def _generating_integral(x: float, fp: FieldParams, power: int, t_power: int, cfg: QuadConfig) -> float:
  # The integrand switches on near q = sqrt(x) / eta and the t factors die out beyond q ~ 1 / eta
  onset = math.sqrt(x) / fp.eta
  points = sorted(set([onset, 4.0 * onset, 16.0 * onset, 1.0 / fp.eta, 3.0 / fp.eta]))
  value = integrate_halfline(_generating_integrand(x, fp.eta2, power, t_power), decay_scale=1.0, cfg=cfg, points=points).value
  return 2.0 * value / math.sqrt(math.pi)


def g1_integral(
  p: Point2,
  fp: FieldParams,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  variant: str = SeriesVariant.PLAIN
) -> complex:
  """
  G1 = e^{-rho^2/2 + i chi} / (sqrt(pi) L^2) int (1 - t)^{-1} exp(-q^2 + rho^2 t / (t - 1)) dq,
  t = exp(-eta^2 q^2). The tilde element carries one more factor of t.

  Raises:
    DomainError: at rho = 0, where G1 diverges.
  """
  _check_relativistic(fp)
  x = p.rho_bar_sq(fp)
  if x == 0.0:
    raise DomainError("G1 diverges at rho = 0")
  t_power = 1 if variant == SeriesVariant.TILDE else 0
  return _phase(p, fp) * _generating_integral(x, fp, power=1, t_power=t_power, cfg=cfg)


def g2_integral(
  p: Point2,
  fp: FieldParams,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  variant: str = SeriesVariant.PLAIN
) -> complex:
  """G2 from sum_n L^1_n t^n = (1 - t)^{-2} exp(t x / (t - 1)); the index shift costs one factor of t."""
  _check_relativistic(fp)
  shift = p.r01(fp) if variant == SeriesVariant.TILDE else p.r10(fp)
  if shift == 0:
    return 0j
  x = p.rho_bar_sq(fp)
  return fp.eta * shift * _phase(p, fp) * _generating_integral(x, fp, power=2, t_power=1, cfg=cfg)


def g_values(p: Point2, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> GValues:
  return GValues(
    g1=g1_integral(p, fp, cfg),
    g2=g2_integral(p, fp, cfg),
    g1_t=g1_integral(p, fp, cfg, variant=SeriesVariant.TILDE),
    g2_t=g2_integral(p, fp, cfg, variant=SeriesVariant.TILDE)
  )


def assemble_block_2d(g: GValues) -> np.ndarray:
  return np.array([
    [0, 0, -1j * g.g1_t, -g.g2_t],
    [0, 0, -g.g2, -1j * g.g1],
    [1j * g.g1_t, -g.g2_t, 0, 0],
    [-g.g2, 1j * g.g1, 0, 0]
  ], dtype=complex)


def kernel2d_matrix(
  p: Point2,
  fp: FieldParams,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  sign: str = KernelSign.PLUS
) -> KernelMatrix:
  """K_2D(rho, 0); there is no Gamma3 counterpart in the plane."""
  g = g_values(p, fp, cfg)
  prefactor = sign_prefactor(sign)
  block = assemble_block_2d(g)
  return KernelMatrix(block=block, regular=prefactor @ block, prefactor=prefactor, delta_diag=1.0, sign=sign, truncated=g.truncated)


def g1_profile(rhos: np.ndarray, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> np.ndarray:
  """Gauge-independent modulus |G1| along the ray y = 0."""
  return np.array([abs(g1_integral(Point2(x=float(r), y=0.0), fp, cfg)) for r in rhos])


def half_max_radius_2d(
  fp: FieldParams,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  reach: Optional[float] = None,
  samples: int = 121
) -> float:
  """
  Width of G1 in the plane: the outermost radius at which rho |G1(rho)| falls
  to half its maximum. |G1| itself grows like 1 / rho at the origin.
  """
  reach = 8.0 if reach is None else reach
  rhos = np.geomspace(reach * 1e-5, reach, samples)
  weighted = rhos * g1_profile(rhos, fp, cfg)
  level = 0.5 * float(np.max(weighted))
  above = np.flatnonzero(weighted >= level)
  i = above[-1]
  if i == len(rhos) - 1:
    return float(rhos[-1])
  fraction = (weighted[i] - level) / (weighted[i] - weighted[i + 1])
  return float(rhos[i] + fraction * (rhos[i + 1] - rhos[i]))
