import math

import numpy as np
from scipy import integrate

from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.quad.datamodel import QuadConfig
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG
from landau_kernels.quad.oscillatory import abel_damped_extrapolation, oscillatory_abel
from landau_kernels.special.bessel import bessel_k
from landau_kernels.utilities.errors import DomainError


def _check_zeta(zeta: float, name: str):
  if zeta == 0:
    raise DomainError(f"{name} diverges at zeta = 0")


def energy(n: int, kz: float, fp: FieldParams) -> float:
  """E_{n,kz} = sqrt(a_n^2 + kz^2) in units of m c^2."""
  if n < 0:
    raise DomainError(f"Landau index must be >= 0, got {n}")
  return math.sqrt(fp.a(n) ** 2 + kz ** 2)


def d1(n: int, zeta: float, fp: FieldParams) -> float:
  """(1/2pi) int e^{i k zeta} / E_{n,k} dk = K0(a_n |zeta|) / pi."""
  _check_zeta(zeta, "d1")
  return bessel_k(0, fp.a(n) * abs(zeta)) / math.pi


def d2(n: int, zeta: float, fp: FieldParams) -> float:
  _check_zeta(zeta, "d2")
  return fp.eta * bessel_k(0, fp.a(n) * abs(zeta)) / math.pi


def d3_closed(n: int, zeta: float, fp: FieldParams) -> float:
  """
  D3 / (i/pi) in closed form: the Abel value of int_0^inf k sin(k zeta) / E dk
  is sign(zeta) a_n K1(a_n |zeta|).
  """
  _check_zeta(zeta, "d3")
  a_n = fp.a(n)
  return math.copysign(1.0, zeta) * a_n * bessel_k(1, a_n * abs(zeta))


def d3_regular(n: int, zeta: float, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG, method: str = "epsilon") -> float:
  """
  D3 / (i/pi) = 1/zeta + A(a_n zeta) as one regularized number, from the
  lobe-accelerated Abel integral of k / sqrt(a_n^2 + k^2).
  """
  _check_zeta(zeta, "d3_regular")
  a_n = fp.a(n)
  return oscillatory_abel(lambda k: k / math.sqrt(a_n * a_n + k * k), zeta, cfg=cfg, method=method)


def d3_damped(n: int, zeta: float, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """The same Abel value through e^{-eps k} damping extrapolated to eps -> 0."""
  _check_zeta(zeta, "d3_damped")
  a_n = fp.a(n)
  value, _ = abel_damped_extrapolation(lambda k: k / math.sqrt(a_n * a_n + k * k), zeta, cfg=cfg)
  return value


def anger_part(n: int, zeta: float, fp: FieldParams) -> float:
  """A(a_n zeta) = D3 / (i/pi) - 1/zeta."""
  return d3_closed(n, zeta, fp) - 1.0 / zeta


def d1_numeric(n: int, zeta: float, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """Direct k_z quadrature (1/pi) int_0^inf cos(k zeta) / E_{n,k} dk with QUADPACK's Fourier weight."""
  _check_zeta(zeta, "d1_numeric")
  a_n = fp.a(n)
  value, _ = integrate.quad(
    lambda k: 1.0 / math.sqrt(a_n * a_n + k * k),
    0.0, np.inf,
    weight="cos", wvar=abs(zeta),
    epsabs=max(cfg.abs_tol, 1e-13), limlst=400, limit=200
  )
  return value / math.pi
