import cmath
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from landau_kernels.kernel3d.field import FieldParams, Point3
from landau_kernels.quad.datamodel import QuadConfig
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, integrate_finite, integrate_line, scaled_config
from landau_kernels.special.polynomials import LaguerreSweep, PolyOrder, hermite, laguerre
from landau_kernels.utilities.errors import DomainError, UnsupportedIndexPair

# Largest Hermite degree handled by the quadrature oracles
ORACLE_MAX_DEGREE = 32
SUM_RULE_NODES = 400


def _relative_coordinates(p1: Point3, p2: Point3, fp: FieldParams):
  dx = p1.x - p2.x
  dy = p1.y - p2.y
  rho_bar_sq = (dx * dx + dy * dy) / (2.0 * fp.L2)
  chi = dx * (p1.y + p2.y) / (2.0 * fp.L2)
  r10 = complex(p2.y - p1.y, -dx) / (fp.L * math.sqrt(2.0))
  r01 = complex(p1.y - p2.y, -dx) / (fp.L * math.sqrt(2.0))
  return rho_bar_sq, chi, r10, r01


def lambda_closed(m: int, n: int, p1: Point3, p2: Point3, fp: FieldParams) -> complex:
  """
  Closed form of the k_x integral Lambda_{m,n}(r1, r2) for |m - n| <= 1.

  Lambda_{k,k}   = L_k^0(rho^2) e^{-rho^2/2 + i chi} / L^2
  Lambda_{k-1,k} = r10 L_{k-1}^1(rho^2) e^{-rho^2/2 + i chi} / (L^2 sqrt(k))
  Lambda_{k,k-1} = r01 L_{k-1}^1(rho^2) e^{-rho^2/2 + i chi} / (L^2 sqrt(k))

  Only the in-plane coordinates of the points are used. A negative index gives 0.

  Raises:
    UnsupportedIndexPair: for |m - n| > 1.
  """
  if abs(m - n) > 1:
    raise UnsupportedIndexPair(m, n)
  if m < 0 or n < 0:
    return 0j
  rho_bar_sq, chi, r10, r01 = _relative_coordinates(p1, p2, fp)
  envelope = cmath.exp(complex(-0.5 * rho_bar_sq, chi)) / fp.L2
  if m == n:
    return envelope * laguerre(PolyOrder(n=n, alpha=0), rho_bar_sq)
  k = max(m, n)
  shift = r10 if m < n else r01
  return envelope * shift * laguerre(PolyOrder(n=k - 1, alpha=1), rho_bar_sq) / math.sqrt(k)


def _hermite_norm(n: int) -> float:
  # C_n = sqrt(2^n n! sqrt(pi))
  return math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))


def lambda_numeric(m: int, n: int, p1: Point3, p2: Point3, fp: FieldParams, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> complex:
  """
  Lambda_{m,n} by direct quadrature over k_x of the Hermite-Gaussian product
    int e^{i k (x1-x2)} H_m(xi_1) H_n(xi_2) e^{-(xi_1^2 + xi_2^2)/2} dk / (C_m C_n L),
  xi_j = y_j / L - k L. Valid for any index pair up to degree 32.
  """
  if m < 0 or n < 0:
    return 0j
  if max(m, n) > ORACLE_MAX_DEGREE:
    raise DomainError(f"lambda_numeric is limited to degree {ORACLE_MAX_DEGREE}, got ({m}, {n})")
  Y1, Y2 = p1.y / fp.L, p2.y / fp.L
  s = (p1.x - p2.x) / fp.L
  center = 0.5 * (Y1 + Y2)
  half_width = 10.0 + 2.0 * math.sqrt(m + n)

  def integrand(u: float) -> complex:
    xi1, xi2 = Y1 - u, Y2 - u
    weight = math.exp(-0.5 * (xi1 * xi1 + xi2 * xi2))
    return cmath.exp(1j * u * s) * hermite(m, xi1) * hermite(n, xi2) * weight

  norm = _hermite_norm(m) * _hermite_norm(n)
  result = integrate_finite(integrand, center - half_width, center + half_width, cfg=scaled_config(cfg, norm))
  return complex(result.value) / (norm * fp.L2)


def hermite_overlap_closed(m: int, n: int, a: float, b: float) -> float:
  """int H_m(q+a) H_n(q+b) e^{-q^2} dq = 2^n sqrt(pi) m! b^{n-m} L_m^{n-m}(-2ab), m <= n."""
  if m > n:
    raise DomainError(f"hermite_overlap_closed requires m <= n, got ({m}, {n})")
  return 2.0 ** n * math.sqrt(math.pi) * math.factorial(m) * b ** (n - m) * laguerre(PolyOrder(n=m, alpha=n - m), -2.0 * a * b)


def hermite_overlap_numeric(m: int, n: int, a: float, b: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  decay = 1.0 + math.sqrt(m + n) / 3.0
  magnitude = _hermite_norm(m) * _hermite_norm(n) * (1.0 + abs(a) + abs(b)) ** (m + n)
  return integrate_line(
    lambda q: hermite(m, q + a) * hermite(n, q + b) * math.exp(-q * q),
    decay_scale=decay,
    cfg=scaled_config(cfg, magnitude)
  ).value


@dataclass(frozen=True)
class SumRulePoint:
  n_terms: int
  value: complex
  target: float

  @property
  def error(self) -> float:
    return abs(self.value - self.target)


def sum_rule_reproduction(
  rho1: Sequence[float],
  width: float,
  n_list: Sequence[int],
  fp: FieldParams,
  nodes: int = SUM_RULE_NODES
) -> List[SumRulePoint]:
  """
  Applies the truncated Landau projector sum_{n < N} Lambda_{n,n}(rho1, rho2) / (2 pi)
  to f(rho2) = exp(-|rho2|^2 / (2 width^2)) and compares with f(rho1).

  The rho2 integral is a tensor Gauss-Legendre rule on a box holding both
  Gaussians; the Laguerre factors for all nodes come from one sweep.
  """
  if not width > 0:
    raise DomainError(f"test function width must be positive, got {width}")
  x1, y1 = float(rho1[0]), float(rho1[1])
  reach = 8.0 * max(width, 2.0 * fp.L)
  nodes_1d, weights_1d = leggauss(nodes)

  def axis(center: float):
    low, high = min(0.0, center) - reach, max(0.0, center) + reach
    return 0.5 * (high - low) * nodes_1d + 0.5 * (high + low), 0.5 * (high - low) * weights_1d

  xs, wx = axis(x1)
  ys, wy = axis(y1)
  X2, Y2 = np.meshgrid(xs, ys, indexing="ij")
  W = np.outer(wx, wy)
  test_function = np.exp(-(X2 ** 2 + Y2 ** 2) / (2.0 * width ** 2))
  dx = x1 - X2
  rho_bar_sq = (dx ** 2 + (y1 - Y2) ** 2) / (2.0 * fp.L2)
  phase = np.exp(1j * dx * (y1 + Y2) / (2.0 * fp.L2))
  weighted = (W * test_function * phase / fp.L2 / (2.0 * math.pi)).ravel()

  sweep = LaguerreSweep(rho_bar_sq.ravel(), alpha=0)
  target = math.exp(-(x1 ** 2 + y1 ** 2) / (2.0 * width ** 2))
  wanted = sorted(set(int(n) for n in n_list))
  points = []
  total = 0j
  for n_terms in range(1, wanted[-1] + 1):
    total += np.dot(weighted, sweep.step())
    if n_terms in wanted:
      points.append(SumRulePoint(n_terms=n_terms, value=complex(total), target=target))
  return points
