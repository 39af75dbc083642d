import functools
import logging
import math
from dataclasses import dataclass

from pydantic import BaseModel

from landau_kernels.kernel3d.constants import KernelSign
from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.quad.datamodel import QuadConfig
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, integrate_halfline
from landau_kernels.transform.gaussian import GaussianSpec, f_rho_moments

HIGH_FIELD_MIN_BETA = 1.0


class VarianceResult(BaseModel):
  z_plus: float
  z_minus: float
  z_g: float
  norm_plus: float
  norm_minus: float


@dataclass(frozen=True)
class ZMoments:
  """
  Longitudinal overlaps of f_z and F_z:
    B0 = int f_z F_z,  B2 = int z^2 f_z F_z,  C2 = int z^2 F_z^2.
  int f_z^2 = int F_z^2 = 1 and int z^2 f_z^2 = d^2 / 2.
  """
  b0: float
  b2: float
  c2: float


@functools.lru_cache(maxsize=256)
def _z_moments_cached(d: float, rel_tol: float, abs_tol: float, max_depth: int) -> ZMoments:
  cfg = QuadConfig(rel_tol=rel_tol, abs_tol=abs_tol, max_depth=max_depth)
  # By Parseval every overlap is an integral over k against |f_z(k)|^2 / 2 pi = d e^{-k^2 d^2} / sqrt(pi)
  weight = 2.0 * d / math.sqrt(math.pi)

  def k_integral(g) -> float:
    return weight * integrate_halfline(lambda k: math.exp(-k * k * d * d) * g(k), decay_scale=1.0 / d, cfg=cfg).value

  b0 = k_integral(lambda k: 1.0 / math.sqrt(1.0 + k * k))
  b2 = k_integral(lambda k: k * k * d * d * (1.0 + k * k) ** -1.5 + k * k * d ** 4 / math.sqrt(1.0 + k * k))
  c2 = 0.5 * d * d + k_integral(lambda k: 1.0 / (1.0 + k * k) ** 2)
  return ZMoments(b0=b0, b2=b2, c2=c2)


def z_moments(d: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> ZMoments:
  if not d > 0:
    raise ValueError(f"width d must be positive, got {d}")
  return _z_moments_cached(float(d), cfg.rel_tol, cfg.abs_tol, cfg.max_depth)


def _sign_factor(sign: str) -> float:
  if sign == KernelSign.PLUS:
    return 1.0
  elif sign == KernelSign.MINUS:
    return -1.0
  else:
    raise ValueError(f"Unknown kernel sign {sign}")


def _check_high_field(fp: FieldParams, name: str):
  if fp.beta < HIGH_FIELD_MIN_BETA:
    logging.warning(f"[{name}] high-field form used at beta={fp.beta:.3g} < {HIGH_FIELD_MIN_BETA}")


def _moments(spec: GaussianSpec, fp: FieldParams, sign: str, cfg: QuadConfig):
  s = _sign_factor(sign)
  d = spec.d
  b0, b2, c0, c2 = f_rho_moments(d, fp)
  z = z_moments(d, cfg)
  norm = 1.0 + 2.0 * s * b0 * z.b0 + c0
  second = (d * d + 0.5 * d * d) + 2.0 * s * (b2 * z.b0 + b0 * z.b2) + (c2 + c0 * z.c2)
  return norm, second


def norm_pm(spec: GaussianSpec, fp: FieldParams, sign: str, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """
  int |f +/- F_z F_rho|^2 d^3r. The normalization constant of the
  high-field transformed function is C = 1 / norm_pm.
  """
  _check_high_field(fp, "norm_pm")
  return _moments(spec, fp, sign, cfg)[0]


def variance(spec: GaussianSpec, fp: FieldParams, sign: str, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """<r^2> of the normalized high-field transformed function of one sign."""
  _check_high_field(fp, "variance")
  norm, second = _moments(spec, fp, sign, cfg)
  return second / norm


def variance_pm(spec: GaussianSpec, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> VarianceResult:
  """
  Variances Z+ and Z- of the transformed Gaussian in the high-field
  approximation, with Z_G = 3 d^2 / 2 of the initial function.

  Each sign is normalized separately. Transverse overlaps are Gaussian
  integrals in closed form; longitudinal ones are k-space quadratures.
  """
  _check_high_field(fp, "variance_pm")
  norm_plus, second_plus = _moments(spec, fp, KernelSign.PLUS, cfg)
  norm_minus, second_minus = _moments(spec, fp, KernelSign.MINUS, cfg)
  return VarianceResult(
    z_plus=second_plus / norm_plus,
    z_minus=second_minus / norm_minus,
    z_g=spec.z_g,
    norm_plus=norm_plus,
    norm_minus=norm_minus
  )
