import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import integrate

from landau_kernels.quad.datamodel import QuadConfig
from landau_kernels.quad.integrate import DEFAULT_QUAD_CONFIG, integrate_finite
from landau_kernels.utilities.errors import DomainError, NonConvergent

# Contract on the returned Abel value
ABEL_ABS_TOL = 1e-6
INITIAL_LOBES = 12
LOBE_BATCH = 4
# Longer epsilon tables only amplify the quadrature noise of the early lobes
WYNN_WINDOW = 21
QAWF_ABS_TOL = 1e-13
QAWF_CYCLES = 1000


def wynn_epsilon(partial_sums: Sequence[float]) -> Tuple[float, float]:
  """
  Epsilon-algorithm limit of a sequence of partial sums.

  Returns:
    (estimate, error) where error is the distance between the two most
    advanced even-column entries.
  """
  sums = [float(s) for s in partial_sums][-WYNN_WINDOW:]
  if len(sums) == 0:
    raise ValueError("wynn_epsilon needs at least one partial sum")
  if len(sums) < 3:
    return sums[-1], abs(sums[-1] - sums[0])

  previous_column = [0.0] * (len(sums) + 1)
  column = list(sums)
  even_estimates = [sums[-1]]
  for j in range(1, len(sums)):
    following = []
    for k in range(len(column) - 1):
      difference = column[k + 1] - column[k]
      if difference == 0.0:
        if (j - 1) % 2 == 0:
          # An even column that is exactly stationary holds the limit
          return column[k + 1], 0.0
        return even_estimates[-1], abs(even_estimates[-1] - even_estimates[max(0, len(even_estimates) - 2)])
      following.append(previous_column[k + 1] + 1.0 / difference)
    previous_column, column = column, following
    if j % 2 == 0 and len(column) > 0:
      even_estimates.append(column[-1])
    if len(column) <= 1:
      break
  if len(even_estimates) < 2:
    return even_estimates[-1], abs(sums[-1] - sums[-2])
  return even_estimates[-1], abs(even_estimates[-1] - even_estimates[-2])


def euler_transform(partial_sums: Sequence[float], depth: int = 8) -> Tuple[float, float]:
  """
  Euler transform of an alternating series, in the partial-sum form:
  the last depth+1 partial sums are averaged pairwise `depth` times.
  """
  sums = np.asarray(partial_sums, dtype=complex)
  depth = min(depth, len(sums) - 1)
  if depth <= 0:
    return sums[-1], float("inf")
  level = sums[-(depth + 1):]
  previous_estimate = level[-1]
  for _ in range(depth):
    previous_estimate = level[-1]
    level = 0.5 * (level[1:] + level[:-1])
  estimate = level[-1]
  estimate = estimate.real if np.isrealobj(partial_sums) or estimate.imag == 0.0 else estimate
  return estimate, float(abs(level[-1] - previous_estimate))


def richardson_extrapolate(steps: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
  """
  Neville extrapolation of values(h) to h -> 0 through a polynomial in h.

  Returns:
    (estimate, error) with error the change contributed by the last point.
  """
  h = np.asarray(steps, dtype=float)
  table = [np.asarray(values, dtype=complex)]
  if len(h) != len(table[0]):
    raise ValueError(f"steps and values must have equal length: {len(h)}, {len(table[0])}")
  for level in range(1, len(h)):
    previous = table[-1]
    current = (h[level:] * previous[:-1] - h[:-level] * previous[1:]) / (h[level:] - h[:-level])
    table.append(current)
  estimate = table[-1][0]
  error = abs(table[-1][0] - table[-2][-1]) if len(table) > 1 else float("inf")
  if np.isrealobj(values):
    estimate = estimate.real
  return estimate, float(error)


def lobe_integrals(g: Callable[[float], float], width: float, start: int, count: int, cfg: QuadConfig) -> List[float]:
  """int g(k) sin(width k) dk over the sine lobes [m pi/width, (m+1) pi/width]."""
  lobe = math.pi / width
  return [
    integrate_finite(lambda k: g(k) * math.sin(width * k), m * lobe, (m + 1) * lobe, cfg=cfg).value
    for m in range(start, start + count)
  ]


def oscillatory_abel(
  g: Callable[[float], float],
  zeta: float,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  method: str = "epsilon"
) -> float:
  """
  Abel value lim_{eps->0+} int_0^inf g(k) sin(k zeta) e^{-eps k} dk for g -> 1 at infinity.

  The axis is cut at the zeros of sin(k zeta); the alternating series of lobe
  integrals is summed by the epsilon algorithm (method="epsilon") or the Euler
  transform (method="euler"). The result is odd in zeta by construction.
  """
  if zeta == 0:
    raise DomainError("oscillatory_abel is singular at zeta = 0")
  width = abs(zeta)
  accelerate = wynn_epsilon if method == "epsilon" else euler_transform

  lobes = lobe_integrals(g, width, 0, INITIAL_LOBES, cfg)
  estimate, error = accelerate(np.cumsum(lobes))
  previous_estimate = None
  while len(lobes) < cfg.max_lobes:
    if previous_estimate is not None and abs(estimate - previous_estimate) <= cfg.abel_tol * max(1.0, abs(estimate)):
      break
    previous_estimate = estimate
    lobes += lobe_integrals(g, width, len(lobes), LOBE_BATCH, cfg)
    estimate, error = accelerate(np.cumsum(lobes))

  spread = error if previous_estimate is None else max(error, abs(estimate - previous_estimate))
  if spread > ABEL_ABS_TOL:
    raise NonConvergent(f"lobe acceleration stalled at zeta={zeta}", best=estimate, estimate=spread)
  return math.copysign(1.0, zeta) * float(estimate)


def damped_sine_integral(g: Callable[[float], float], zeta: float, eps: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> float:
  """int_0^inf g(k) e^{-eps k} sin(k zeta) dk by QUADPACK's Fourier-weight routine."""
  value, _ = integrate.quad(
    lambda k: g(k) * math.exp(-eps * k),
    0.0, np.inf,
    weight="sin", wvar=abs(zeta),
    epsabs=max(cfg.abs_tol, QAWF_ABS_TOL), limlst=QAWF_CYCLES, limit=200
  )
  return math.copysign(1.0, zeta) * value


def abel_damped_extrapolation(g: Callable[[float], float], zeta: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG) -> Tuple[float, float]:
  """
  Second, independent regularization of the same Abel value: the e^{-eps k}
  damped integral on the ladder eps = c |zeta| for c in cfg.damping_ladder,
  extrapolated to eps -> 0.

  The damped integral is analytic in eps within a disk of radius |zeta|, so
  the ladder is measured in units of |zeta|.
  """
  if zeta == 0:
    raise DomainError("abel_damped_extrapolation is singular at zeta = 0")
  ladder = [c * abs(zeta) for c in cfg.damping_ladder]
  values = [damped_sine_integral(g, zeta, eps, cfg) for eps in ladder]
  estimate, error = richardson_extrapolate(ladder, values)
  if error > 1e-4:
    logging.warning(f"[abel_damped_extrapolation] weak extrapolation at zeta={zeta}: error {error}")
  return float(estimate), error
