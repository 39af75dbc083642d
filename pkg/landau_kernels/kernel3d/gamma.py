import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special

from landau_kernels.kernel3d.field import FieldParams, Point3
from landau_kernels.quad.datamodel import SeriesPolicy
from landau_kernels.quad.series import DEFAULT_SERIES_POLICY
from landau_kernels.special.polynomials import LaguerreSweep
from landau_kernels.utilities.errors import DomainError

# Landau indices are summed in blocks of this many terms
BLOCK_SIZE = 256
# Beyond a_n |zeta| = -ln(term_tol) + BESSEL_MARGIN every term is below term_tol whatever its Laguerre factor
BESSEL_MARGIN = 10.0
HIGH_FIELD_MIN_BETA = 1.0


@dataclass(frozen=True)
class GammaValues:
  """
  Kernel elements at r (with r2 = 0), in lambda_c^-3.

  g3_regular and g3_t_regular exclude the contact term i delta(rho^2) / (pi L^2 z);
  g3_delta_coeff is its coefficient 1 / (pi L^2 z), reported and never sampled.
  """
  g1: complex
  g2: complex
  g3_regular: complex
  g1_t: complex
  g2_t: complex
  g3_t_regular: complex
  g3_delta_coeff: float
  terms_used: int
  truncated: bool


@dataclass(frozen=True)
class GammaGrid:
  g1: np.ndarray
  g2: np.ndarray
  g3_regular: np.ndarray
  g1_t: np.ndarray
  g2_t: np.ndarray
  g3_t_regular: np.ndarray
  g3_delta_coeff: np.ndarray
  terms_used: np.ndarray
  truncated: np.ndarray

  def at(self, i: int) -> GammaValues:
    return GammaValues(
      g1=complex(self.g1[i]),
      g2=complex(self.g2[i]),
      g3_regular=complex(self.g3_regular[i]),
      g1_t=complex(self.g1_t[i]),
      g2_t=complex(self.g2_t[i]),
      g3_t_regular=complex(self.g3_t_regular[i]),
      g3_delta_coeff=float(self.g3_delta_coeff[i]),
      terms_used=int(self.terms_used[i]),
      truncated=bool(self.truncated[i])
    )


def _earliest_safe_index(rho_bar_sq: np.ndarray, abs_zeta: np.ndarray, fp: FieldParams, policy: SeriesPolicy) -> np.ndarray:
  """
  Index from which sub-threshold terms may count towards the stop: past the
  Laguerre turning point n ~ rho^2/4, or past the point where the Bessel factor
  alone is negligible, whichever comes first.
  """
  turning_point = np.floor(rho_bar_sq / 4.0)
  if fp.nonrelativistic:
    return turning_point.astype(np.int64)
  x_star = -math.log(policy.term_tol) + BESSEL_MARGIN
  bessel_point = np.ceil(np.maximum((x_star / abs_zeta) ** 2 - 1.0, 0.0) / fp.eta2)
  return np.minimum(turning_point, np.minimum(bessel_point, policy.n_max)).astype(np.int64)


def _run_lengths(below: np.ndarray, carry: np.ndarray) -> np.ndarray:
  """Length of the run of True ending at each row of a (rows, points) mask, continuing `carry`."""
  rows = np.arange(below.shape[0])[:, None]
  last_false = np.maximum.accumulate(np.where(below, -1, rows), axis=0)
  return np.where(last_false < 0, rows + 1 + carry[None, :], rows - last_false)


def landau_sums(
  rho_bar_sq: np.ndarray,
  zeta: np.ndarray,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
  """
  The five Landau sums behind the Gamma elements, at arrays of (rho^2, zeta):
    s1  = sum_n K0(a_n |z|) l_n          s1t = sum_n K0(a_{n+1} |z|) l_n
    s2  = sum_{n>=1} K0(a_n |z|) l1_{n-1}
    s3  = sum_n sign(z) a_n K1(a_n |z|) l_n
    s3t = sum_n sign(z) a_{n+1} K1(a_{n+1} |z|) l_n
  with l_n = e^{-rho^2/2} L_n^0(rho^2) and l1_n = e^{-rho^2/2} L_n^1(rho^2).

  Points leave the computation as soon as their stopping rule is met.

  Returns:
    (sums of shape (5, points), terms_used, truncated)
  """
  rho_bar_sq = np.atleast_1d(np.asarray(rho_bar_sq, dtype=float))
  zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
  if np.any(zeta == 0):
    raise DomainError("Gamma series diverge at z = 0")
  count = len(rho_bar_sq)
  out_sums = np.zeros((5, count))
  out_terms = np.full(count, policy.n_max, dtype=np.int64)
  out_truncated = np.ones(count, dtype=bool)

  active = np.arange(count)
  abs_zeta = np.abs(zeta)
  sign = np.sign(zeta)
  safe_index = _earliest_safe_index(rho_bar_sq, abs_zeta, fp, policy)
  sweep0 = LaguerreSweep(rho_bar_sq, alpha=0)
  sweep1 = LaguerreSweep(rho_bar_sq, alpha=1)
  partial = np.zeros((5, count))
  carry = np.zeros(count, dtype=np.int64)

  n0 = 0
  while active.size > 0 and n0 < policy.n_max:
    rows = min(BLOCK_SIZE, policy.n_max - n0)
    l0 = np.empty((rows, active.size))
    l1 = np.zeros((rows, active.size))
    for i in range(rows):
      l0[i] = sweep0.step()
      if n0 + i >= 1:
        l1[i] = sweep1.step()

    n = np.arange(n0, n0 + rows)
    a = np.atleast_1d(fp.a(n))[:, None]
    a_next = np.atleast_1d(fp.a(n + 1))[:, None]
    arg = a * abs_zeta[active][None, :]
    arg_next = a_next * abs_zeta[active][None, :]
    k0 = special.k0(arg)
    k0_next = special.k0(arg_next)
    s = sign[active][None, :]
    terms = np.stack([
      k0 * l0,
      k0 * l1,
      s * a * special.k1(arg) * l0,
      k0_next * l0,
      s * a_next * special.k1(arg_next) * l0
    ])

    magnitude = np.max(np.abs(terms[:3]), axis=0)
    below = (magnitude < policy.term_tol) & (n[:, None] >= safe_index[active][None, :])
    runs = _run_lengths(below, carry[active])
    reached = runs >= policy.consecutive_below
    finished = np.any(reached, axis=0)
    stop_row = np.where(finished, np.argmax(reached, axis=0), rows - 1)
    keep_rows = np.arange(rows)[:, None] <= stop_row[None, :]
    partial[:, active] += np.sum(np.where(keep_rows[None], terms, 0.0), axis=1)

    done = active[finished]
    out_sums[:, done] = partial[:, done]
    out_terms[done] = n0 + stop_row[finished] + 1
    out_truncated[done] = False
    carry[active] = runs[-1]

    still_active = ~finished
    active = active[still_active]
    sweep0.compress(still_active)
    sweep1.compress(still_active)
    n0 += rows

  if active.size > 0:
    out_sums[:, active] = partial[:, active]
    logging.warning(f"[landau_sums] {active.size} point(s) truncated at n_max={policy.n_max}")
  return out_sums, out_terms, out_truncated


def gamma_grid(
  x: np.ndarray,
  y: np.ndarray,
  z: np.ndarray,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY
) -> GammaGrid:
  """Gamma elements at arrays of points r = (x, y, z), r2 = 0."""
  x = np.atleast_1d(np.asarray(x, dtype=float))
  y = np.atleast_1d(np.asarray(y, dtype=float))
  z = np.atleast_1d(np.asarray(z, dtype=float))
  rho_bar_sq = (x ** 2 + y ** 2) / (2.0 * fp.L2)
  sums, terms_used, truncated = landau_sums(rho_bar_sq, z, fp, policy)
  phase = np.exp(1j * x * y / (2.0 * fp.L2)) / (math.pi * fp.L2)
  r10 = (-y - 1j * x) / (fp.L * math.sqrt(2.0))
  r01 = (y - 1j * x) / (fp.L * math.sqrt(2.0))
  return GammaGrid(
    g1=phase * sums[0],
    g2=fp.eta * r10 * phase * sums[1],
    g3_regular=1j * phase * sums[2],
    g1_t=phase * sums[3],
    g2_t=fp.eta * r01 * phase * sums[1],
    g3_t_regular=1j * phase * sums[4],
    g3_delta_coeff=1.0 / (math.pi * fp.L2 * z),
    terms_used=terms_used,
    truncated=truncated
  )


def gamma_values(p: Point3, fp: FieldParams, policy: SeriesPolicy = DEFAULT_SERIES_POLICY) -> GammaValues:
  """
  Gamma1..Gamma3 and their tilde variants at p.

  Raises:
    DomainError: at z = 0, where Gamma1 and Gamma3 diverge.
  """
  if p.z == 0:
    raise DomainError(f"Gamma elements diverge at z = 0 (point {p})")
  return gamma_grid([p.x], [p.y], [p.z], fp, policy).at(0)


def gamma_values_highfield(p: Point3, fp: FieldParams) -> GammaValues:
  """
  Single-term (n = 0) forms valid above the Schwinger field:
    Gamma1 = e^{-rho^2/2 + i chi} K0(|z|) / (pi L^2)
    Gamma3 = i e^{-rho^2/2 + i chi} sign(z) K1(|z|) / (pi L^2)   (regular part)
  Gamma2 and the tilde elements vanish at this order.
  """
  if p.z == 0:
    raise DomainError(f"Gamma elements diverge at z = 0 (point {p})")
  if fp.beta < HIGH_FIELD_MIN_BETA:
    logging.warning(f"[gamma_values_highfield] beta={fp.beta} is below the high-field range")
  envelope = np.exp(complex(-0.5 * p.rho_bar_sq(fp), p.chi(fp))) / (math.pi * fp.L2)
  return GammaValues(
    g1=complex(envelope * special.k0(abs(p.z))),
    g2=0j,
    g3_regular=complex(1j * envelope * math.copysign(1.0, p.z) * special.k1(abs(p.z))),
    g1_t=0j,
    g2_t=0j,
    g3_t_regular=0j,
    g3_delta_coeff=1.0 / (math.pi * fp.L2 * p.z),
    terms_used=1,
    truncated=False
  )


def _crossing(radii: np.ndarray, magnitudes: np.ndarray, level: float) -> float:
  """Last radius where magnitudes fall through `level`, interpolated in log magnitude."""
  above = np.flatnonzero(magnitudes >= level)
  if len(above) == 0:
    return 0.0
  i = above[-1]
  if i == len(radii) - 1:
    return float(radii[-1])
  lo, hi = math.log(magnitudes[i]), math.log(max(magnitudes[i + 1], 1e-300))
  fraction = (lo - math.log(level)) / (lo - hi)
  return float(radii[i] + fraction * (radii[i + 1] - radii[i]))


def level_set_extents(
  fp: FieldParams,
  level: float,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  offset: float = 0.3,
  reach: float = 4.0,
  samples: int = 97
) -> Tuple[float, float]:
  """
  Extents of the level set |Gamma1| = level in the y = 0 plane: along x at
  z = offset, and along z at x = 0 (scanned from z = offset). Both are clipped to `reach`.

  Returns:
    (x_extent, z_extent)
  """
  xs = np.geomspace(reach * 1e-4, reach, samples)
  along_x = gamma_grid(xs, np.zeros_like(xs), np.full_like(xs, offset), fp, policy)
  zs = np.geomspace(offset, reach, samples)
  along_z = gamma_grid(np.zeros_like(zs), np.zeros_like(zs), zs, fp, policy)
  return _crossing(xs, np.abs(along_x.g1), level), _crossing(zs, np.abs(along_z.g1), level)


def half_max_radius(
  fp: FieldParams,
  z: float,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  reach: Optional[float] = None,
  samples: int = 161
) -> float:
  """Distance along x (y = 0, fixed z) at which |Gamma1| drops to half its on-axis value."""
  reach = 20.0 if reach is None else reach
  xs = np.concatenate([[0.0], np.geomspace(reach * 1e-5, reach, samples)])
  grid = gamma_grid(xs, np.zeros_like(xs), np.full_like(xs, z), fp, policy)
  magnitudes = np.abs(grid.g1)
  return _crossing(xs[1:], magnitudes[1:], 0.5 * magnitudes[0])
