import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel
from scipy import special

from landau_kernels.kernel3d.constants import MomentMethod, SeriesVariant
from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.kernel3d.gamma import gamma_grid
from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy, SeriesResult
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, DecayKind, integrate_halfline
from landau_kernels.quad.series import DEFAULT_SERIES_POLICY, sum_series_array
from landau_kernels.special.polynomials import PolyOrder, laguerre, legendre_p_zero, legendre_p_zero_even
from landau_kernels.utilities.errors import DomainError

SQRT2 = math.sqrt(2.0)
TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class MomentSums:
  """
  s00 = sum M0^z M0^rho, s20 = sum M2^z M0^rho, s02 = sum M0^z M2^rho.
  """
  s00: float
  s20: float
  s02: float
  truncated: bool = False


class MomentResult(BaseModel):
  """Second normalized moments of Gamma1 and Gamma1-tilde, in lambda_c^2."""
  w1_rho: float
  w1_z: float
  w1: float
  w1_rho_t: float
  w1_z_t: float
  w1_t: float
  s00: float
  s20: float
  s02: float
  method: str
  truncated: bool = False

  @classmethod
  def from_sums(cls, plain: MomentSums, tilde: MomentSums, method: str) -> "MomentResult":
    w1_rho = plain.s02 / plain.s00
    w1_z = plain.s20 / plain.s00
    w1_rho_t = tilde.s02 / tilde.s00
    w1_z_t = tilde.s20 / tilde.s00
    return cls(
      w1_rho=w1_rho,
      w1_z=w1_z,
      w1=w1_rho + w1_z,
      w1_rho_t=w1_rho_t,
      w1_z_t=w1_z_t,
      w1_t=w1_rho_t + w1_z_t,
      s00=plain.s00,
      s20=plain.s20,
      s02=plain.s02,
      method=method,
      truncated=plain.truncated or tilde.truncated
    )


def m_z(nu: int, n: int, fp: FieldParams) -> float:
  """(1/pi) int z^nu K0(a_n |z|) dz: 1/a_n for nu = 0, 1/a_n^3 for nu = 2."""
  if nu not in (0, 2):
    raise DomainError(f"m_z is defined for nu in (0, 2), got {nu}")
  return fp.a(n) ** -(nu + 1)


def m_rho0(n: int) -> float:
  """int_0^inf e^{-t/2} J0(t/2) L_n(t) dt = sqrt(2) P_n(0)"""
  return SQRT2 * legendre_p_zero(n)


def m_rho_numeric(nu: int, n: int, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """
  Quadrature of M_nu^rho after the angular integral:
    nu = 0: int e^{-t/2} J0(t/2) L_n(t) dt
    nu = 2: 2 L^2 int e^{-t/2} J0(t/2) t L_n(t) dt
  """
  if nu not in (0, 2):
    raise DomainError(f"m_rho_numeric is defined for nu in (0, 2), got {nu}")
  order = PolyOrder(n=n, alpha=0)
  weight = 1.0 if nu == 0 else 2.0 * fp.L2
  # L_n(t) grows like t^n / n!, which pushes the effective cutoff out with n
  decay_scale = 2.0 + 0.5 * n
  value = integrate_halfline(
    lambda t: math.exp(-0.5 * t) * special.j0(0.5 * t) * laguerre(order, t) * (t if nu == 2 else 1.0),
    decay_scale=decay_scale,
    cfg=cfg,
    kind=DecayKind.EXPONENTIAL
  ).value
  return weight * value


def m_z_numeric(nu: int, n: int, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """(2/pi) int_0^inf z^nu K0(a_n z) dz by quadrature."""
  if nu not in (0, 2):
    raise DomainError(f"m_z_numeric is defined for nu in (0, 2), got {nu}")
  a_n = fp.a(n)
  value = integrate_halfline(
    lambda z: z ** nu * special.k0(a_n * z) if z > 0 else 0.0,
    decay_scale=1.0 / a_n,
    cfg=cfg,
    kind=DecayKind.EXPONENTIAL
  ).value
  return 2.0 * value / math.pi


def _landau_energies(fp: FieldParams, n: np.ndarray) -> np.ndarray:
  return np.atleast_1d(fp.a(n))


def _sum_relative(terms: np.ndarray, policy: SeriesPolicy) -> SeriesResult:
  # term_tol applies relative to the largest term: s02 scales like L^2
  scale = float(np.max(np.abs(terms)))
  if scale == 0.0:
    return SeriesResult(value=0.0, terms_used=len(terms), truncated=False)
  result = sum_series_array(terms / scale, policy, alternating=True)
  return SeriesResult(value=scale * result.value, terms_used=result.terms_used, truncated=result.truncated, error=scale * result.error)


def moment_sums(
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  variant: str = SeriesVariant.PLAIN
) -> MomentSums:
  """
  The three Landau sums by direct summation over the even indices n = 2m
  (P_n(0) vanishes for odd n). The sums alternate in sign, so the final
  partial sums go through the Euler transform. The stopping rule is applied
  to the terms relative to the largest one.

  Differences 1/a_n - 1/a_{n+1} are taken as (a_{n+1}^2 - a_n^2) / (a_n a_{n+1} (a_n + a_{n+1}))
  so that L^2 (a_{n+1}^2 - a_n^2) = 2 is exact (0 in the nonrelativistic mode).
  """
  shift = 1 if variant == SeriesVariant.TILDE else 0
  m_count = max(policy.n_max // 2, 2)
  legendre = legendre_p_zero_even(m_count - 1)
  n = 2 * np.arange(m_count)

  a = _landau_energies(fp, n + shift)
  a_next = _landau_energies(fp, n + 1 + shift)
  a_previous = _landau_energies(fp, np.maximum(n - 1 + shift, 0))
  # L^2 (a_{k+1}^2 - a_k^2)
  gap = 0.0 if fp.nonrelativistic else fp.L2 * fp.eta2

  def scaled_difference(low: np.ndarray, high: np.ndarray) -> np.ndarray:
    return gap / (low * high * (low + high))

  e_n = scaled_difference(a, a_next)
  e_previous = scaled_difference(a_previous, a)
  s02_terms = 2.0 * SQRT2 * (legendre * e_n + n * legendre * (e_n - e_previous))

  s00 = _sum_relative(SQRT2 * legendre / a, policy)
  s20 = _sum_relative(SQRT2 * legendre / a ** 3, policy)
  s02 = _sum_relative(s02_terms, policy)
  return MomentSums(
    s00=float(np.real(s00.value)),
    s20=float(np.real(s20.value)),
    s02=float(np.real(s02.value)),
    truncated=s00.truncated or s20.truncated or s02.truncated
  )


def _generating_integral(integrand: Callable[[float], float], fp: FieldParams, cfg: QuadConfig) -> float:
  breakpoints = None
  if fp.eta > 0:
    breakpoints = [1.0 / fp.eta, 3.0 / fp.eta]
  return integrate_halfline(integrand, decay_scale=1.0, cfg=cfg, points=breakpoints).value


def moment_sums_integral(
  fp: FieldParams,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  variant: str = SeriesVariant.PLAIN
) -> MomentSums:
  """
  The same sums through the Legendre generating function sum_n P_n(0) t^n = (1 + t^2)^{-1/2}
  and 1/a_n = (2/sqrt pi) int e^{-q^2} t^n dq with t = exp(-eta^2 q^2):
    s00 = sqrt2 (2/sqrt pi) int e^{-q^2} (1 + t^2)^{-1/2} dq
    s20 = sqrt2 (4/sqrt pi) int q^2 e^{-q^2} (1 + t^2)^{-1/2} dq
    s02 = 2 sqrt2 L^2 (2/sqrt pi) int e^{-q^2} (1 - t^2) (1 + t^2)^{-3/2} dq
  The tilde variant carries one more factor t.
  """
  eta2 = 0.0 if fp.nonrelativistic else fp.eta2
  tilde = variant == SeriesVariant.TILDE

  def t_of(q: float) -> float:
    return math.exp(-eta2 * q * q)

  def extra(q: float) -> float:
    return t_of(q) if tilde else 1.0

  def s00_integrand(q: float) -> float:
    t = t_of(q)
    return math.exp(-q * q) * extra(q) / math.sqrt(1.0 + t * t)

  def s20_integrand(q: float) -> float:
    t = t_of(q)
    return q * q * math.exp(-q * q) * extra(q) / math.sqrt(1.0 + t * t)

  def s02_integrand(q: float) -> float:
    t = t_of(q)
    # L^2 (1 - t^2), with 1 - t^2 = -expm1(-2 eta^2 q^2)
    one_minus_t2 = fp.L2 * -math.expm1(-2.0 * eta2 * q * q)
    return math.exp(-q * q) * extra(q) * one_minus_t2 / (1.0 + t * t) ** 1.5

  s00 = SQRT2 * TWO_OVER_SQRT_PI * _generating_integral(s00_integrand, fp, cfg)
  s20 = SQRT2 * 2.0 * TWO_OVER_SQRT_PI * _generating_integral(s20_integrand, fp, cfg)
  s02 = 2.0 * SQRT2 * TWO_OVER_SQRT_PI * _generating_integral(s02_integrand, fp, cfg)
  return MomentSums(s00=s00, s20=s20, s02=s02)


def appendix_integrals(eta: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> Tuple[float, float]:
  """
  The two generating-function integrals, t = exp(-eta^2 q^2):
    I1 = (2/sqrt pi) int e^{-q^2} (1 + t^2)^{-1/2} dq          = sum_n P_n(0) / a_n
    I2 = -(2/sqrt pi) int e^{-q^2} t^2 (1 + t^2)^{-3/2} dq     = sum_n n P_n(0) / a_n
  with limits 1/sqrt2 and -1/sqrt8 at eta -> 0; at eta >> 1, I1 -> 1 and I2 -> 0.
  """
  if eta < 0:
    raise DomainError(f"eta must be >= 0, got {eta}")
  points = [1.0 / eta, 3.0 / eta] if eta > 0 else None
  eta2 = eta * eta

  def first(q: float) -> float:
    t = math.exp(-eta2 * q * q)
    return math.exp(-q * q) / math.sqrt(1.0 + t * t)

  def second(q: float) -> float:
    t = math.exp(-eta2 * q * q)
    return -math.exp(-q * q) * t * t / (1.0 + t * t) ** 1.5

  i1 = TWO_OVER_SQRT_PI * integrate_halfline(first, decay_scale=1.0, cfg=cfg, points=points).value
  i2 = TWO_OVER_SQRT_PI * integrate_halfline(second, decay_scale=1.0, cfg=cfg, points=points).value
  return i1, i2


def w1(
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  method: str = MomentMethod.INTEGRAL,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG
) -> MomentResult:
  """
  W1^rho = s02 / s00, W1^z = s20 / s00 and W1 = W1^rho + W1^z, with tilde twins.

  W1 starts at 3 and first rises as 3 + 3 beta before it falls to 1 at high
  field. The tilde moments only fall off like 1/beta: W1~ is about 1.3e-3 at
  beta = 1e3 and about 1.3e-4 at beta = 1e4.
  """
  if method == MomentMethod.DIRECT_SUM:
    plain = moment_sums(fp, policy, SeriesVariant.PLAIN)
    tilde = moment_sums(fp, policy, SeriesVariant.TILDE)
  elif method == MomentMethod.INTEGRAL:
    plain = moment_sums_integral(fp, cfg, SeriesVariant.PLAIN)
    tilde = moment_sums_integral(fp, cfg, SeriesVariant.TILDE)
  else:
    raise ValueError(f"Unknown moment method {method}")
  return MomentResult.from_sums(plain, tilde, method)


def grid_moment(
  element: str,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  half_widths: Sequence[float] = (3.0, 3.0, 3.0),
  nodes: int = 8,
  power: int = 2
) -> complex:
  """
  int_box r^power Gamma_element(r) d^3r on the box [-h, h]^3 by a tensor
  Gauss-Legendre rule. An even node count keeps every node off the planes
  x = 0, y = 0, z = 0.

  Args:
    element: one of the GammaGrid fields, e.g. "g1", "g2", "g3_regular".
  """
  if nodes % 2 != 0:
    raise DomainError(f"grid_moment needs an even node count, got {nodes}")
  x_nodes, weights = leggauss(nodes)
  axes = [h * x_nodes for h in half_widths]
  axis_weights = [h * weights for h in half_widths]
  X, Y, Z = np.meshgrid(*axes, indexing="ij")
  W = np.einsum("i,j,k->ijk", *axis_weights)
  element_values = getattr(gamma_grid(X.ravel(), Y.ravel(), Z.ravel(), fp, policy), element)
  r_squared = (X ** 2 + Y ** 2 + Z ** 2).ravel()
  return complex(np.sum(W.ravel() * r_squared ** (power / 2.0) * element_values))
