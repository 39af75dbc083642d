import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from landau_kernels.kernel3d.constants import KernelSign
from landau_kernels.kernel3d.field import FieldParams, Point3
from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG
from landau_kernels.quad.series import DEFAULT_SERIES_POLICY
from landau_kernels.special.polynomials import LaguerreSweep
from landau_kernels.transform.gaussian import GaussianSpec, f, f_rho_closed, f_z, f_z_level, f_z_level_overlaps, landau_weights
from landau_kernels.transform.variance import HIGH_FIELD_MIN_BETA, norm_pm
from landau_kernels.utilities.errors import DomainError

# Lambda_{n,n} is 2 pi times the orthogonal projector onto level n
PROJECTOR_SCALE = 2.0 * math.pi
# Landau levels summed by the general evaluator
LEVEL_CEILING = 512
# Weight of f_rho allowed beyond the last summed level
LEVEL_TAIL_WEIGHT = 1e-4
# Transverse extent of f, in units of d
GAUSSIAN_REACH = 6.0
PROJECTION_MIN_NODES = 48
PROJECTION_MAX_NODES = 1600


@dataclass(frozen=True)
class SpinorValue:
  components: np.ndarray
  terms_used: int
  truncated: bool
  # Squared norm of the unnormalized spinor over the summed levels
  norm: float = 1.0


def _sign_factor(sign: str) -> float:
  if sign == KernelSign.PLUS:
    return 1.0
  elif sign == KernelSign.MINUS:
    return -1.0
  else:
    raise ValueError(f"Unknown kernel sign {sign}")


def _check_component(spec: GaussianSpec):
  if spec.component != 2:
    raise DomainError(f"transformed functions are available for component 2 only, got {spec.component}")


def psi_pm_highfield(
  p: Point3,
  spec: GaussianSpec,
  fp: FieldParams,
  sign: str = KernelSign.PLUS,
  normalize: bool = True,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG
) -> np.ndarray:
  """
  High-field (n = 0) transformed Gaussian
    (sqrt(2C) / 2) [(0, f, 0, i f) +/- (0, F_z F_rho, 0, i F_z F_rho)]
  with C = 1 / norm_pm, or C = 1 when normalize is False.
  """
  _check_component(spec)
  if fp.beta < HIGH_FIELD_MIN_BETA:
    logging.warning(f"[psi_pm_highfield] high-field form used at beta={fp.beta:.3g} < {HIGH_FIELD_MIN_BETA}")
  s = _sign_factor(sign)
  c = 1.0 / norm_pm(spec, fp, sign, cfg) if normalize else 1.0
  amplitude = math.sqrt(2.0 * c) / 2.0 * (f(p.x, p.y, p.z, spec.d) + s * f_z(p.z, spec.d, cfg) * f_rho_closed(p.x, p.y, spec.d, fp))
  return np.array([0.0, amplitude, 0.0, 1j * amplitude], dtype=complex)


def _projection_axis(center: float, d: float, kernel_reach: float, resolution: float):
  low = max(-GAUSSIAN_REACH * d, center - kernel_reach)
  high = min(GAUSSIAN_REACH * d, center + kernel_reach)
  if not high > low:
    return None
  nodes = int(np.clip(3.0 * (high - low) / resolution + 32, PROJECTION_MIN_NODES, PROJECTION_MAX_NODES))
  x, w = leggauss(nodes)
  return 0.5 * (high - low) * x + 0.5 * (high + low), 0.5 * (high - low) * w


def landau_projections(x: float, y: float, d: float, fp: FieldParams, count: int) -> Tuple[np.ndarray, np.ndarray]:
  """
  Transverse parts of the Landau terms applied to f_rho:
    G_n = int Lambda_{n,n}(rho, rho2) f_rho(rho2) d^2 rho2
    H_n = int r10 L^1_{n-1}(rho_bar^2) e^{-rho_bar^2/2 + i chi} / L^2 f_rho(rho2) d^2 rho2  (H_0 = 0)
  for n < count, on a tensor Gauss-Legendre grid.
  """
  L, L2 = fp.L, fp.L2
  kernel_reach = L * (math.sqrt(8.0 * count) + 8.0)
  resolution = min(d, L, 2.0 * math.pi * L / math.sqrt(2.0 * count))
  x_axis = _projection_axis(x, d, kernel_reach, resolution)
  y_axis = _projection_axis(y, d, kernel_reach, resolution)
  g = np.zeros(count, dtype=complex)
  h = np.zeros(count, dtype=complex)
  if x_axis is None or y_axis is None:
    return g, h

  X2, Y2 = np.meshgrid(x_axis[0], y_axis[0], indexing="ij")
  W = np.outer(x_axis[1], y_axis[1])
  dx = x - X2
  rho_bar_sq = ((dx ** 2 + (y - Y2) ** 2) / (2.0 * L2)).ravel()
  phase = np.exp(1j * dx * (y + Y2) / (2.0 * L2))
  f_rho = np.exp(-(X2 ** 2 + Y2 ** 2) / (2.0 * d * d)) / (math.sqrt(math.pi) * d)
  weighted = (W * f_rho * phase / L2).ravel()
  r10 = ((Y2 - y) - 1j * dx).ravel() / (L * math.sqrt(2.0))

  plain = LaguerreSweep(rho_bar_sq, alpha=0)
  shifted = LaguerreSweep(rho_bar_sq, alpha=1)
  for n in range(count):
    g[n] = np.dot(weighted, plain.step())
    if n > 0:
      h[n] = np.dot(weighted * r10, shifted.step())
  return g, h


def level_count(d: float, fp: FieldParams, policy: SeriesPolicy = DEFAULT_SERIES_POLICY) -> Tuple[int, bool]:
  """
  Smallest number of Landau levels leaving at most LEVEL_TAIL_WEIGHT of f_rho
  beyond them, capped at min(policy.n_max, LEVEL_CEILING).

  Returns:
    (levels, truncated)
  """
  ceiling = min(policy.n_max, LEVEL_CEILING)
  tail = 1.0 - np.cumsum(landau_weights(d, fp.L, ceiling))
  hits = np.flatnonzero(tail <= LEVEL_TAIL_WEIGHT)
  if len(hits) > 0:
    return int(hits[0]) + 1, False
  logging.warning(f"[level_count] Landau weight {tail[-1]:.3g} left beyond {ceiling} levels at d={d}, beta={fp.beta:.3g}")
  return ceiling, True


def norm_pm_general(spec: GaussianSpec, fp: FieldParams, sign: str, levels: int) -> float:
  """
  Squared norm of the unnormalized general spinor summed over `levels` levels:
    1 +/- 2 sum_n w_n int f_z F1_n + sum_n (|F1_n|^2 |G_n|^2 + |F2_n|^2 |H_n|^2)
  with w_n = int f_rho G_n = 2 pi P_n, |G_n|^2 = 4 pi^2 P_n and |H_n|^2 = 4 pi^2 n P_n.
  A single level gives norm_pm.
  """
  s = _sign_factor(sign)
  n = np.arange(levels)
  weights = landau_weights(spec.d, fp.L, levels)
  overlap, f1_norm, f2_norm = f_z_level_overlaps(spec.d, fp.a(n), fp.eta)
  cross = PROJECTOR_SCALE * np.sum(overlap * weights)
  squares = PROJECTOR_SCALE ** 2 * np.sum((f1_norm + n * f2_norm) * weights)
  return float(1.0 + 2.0 * s * cross + squares)


def psi_pm_general(
  p: Point3,
  spec: GaussianSpec,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  sign: str = KernelSign.PLUS,
  normalize: bool = True,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG
) -> SpinorValue:
  """
  Transformed Gaussian with every Landau level kept:
    (sqrt(2C) / 2) [(0, f, 0, i f) +/- sum_n (-i F2_n H_n, F1_n G_n, -F2_n H_n, i F1_n G_n)]
  where F1_n and F2_n are the z-convolutions of f_z with D1 - i D3 and D2 of level n.
  C = 1 / norm_pm_general, or C = 1 when normalize is False.

  The number of levels comes from level_count; `truncated` is raised when
  the ceiling left more than LEVEL_TAIL_WEIGHT of f_rho unsummed.
  """
  _check_component(spec)
  s = _sign_factor(sign)
  d = spec.d
  levels, truncated = level_count(d, fp, policy)
  g, h = landau_projections(p.x, p.y, d, fp, levels)
  a = fp.a(np.arange(levels))
  f1 = np.array([f_z_level(p.z, d, a_n, "d1_minus_i_d3", cfg) for a_n in a])
  f2 = fp.eta * np.array([f_z_level(p.z, d, a_n, "d2", cfg) for a_n in a])
  diagonal = np.sum(f1 * g)
  shifted = np.sum(f2 * h)
  norm = norm_pm_general(spec, fp, sign, levels)
  c = 1.0 / norm if normalize else 1.0
  local = f(p.x, p.y, p.z, d)
  components = math.sqrt(2.0 * c) / 2.0 * np.array([
    s * (-1j * shifted),
    local + s * diagonal,
    s * (-shifted),
    1j * (local + s * diagonal)
  ], dtype=complex)
  return SpinorValue(components=components, terms_used=levels, truncated=truncated, norm=norm)
