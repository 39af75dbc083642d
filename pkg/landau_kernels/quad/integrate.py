import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from landau_kernels.quad.datamodel import Number, QuadConfig, QuadResult
from landau_kernels.utilities.errors import NonConvergent

DEFAULT_QUAD_CONFIG = QuadConfig()

# QUADPACK may report failure while the estimate is already this close to the target
ACCEPTABLE_ERROR_FACTOR = 1e3


class DecayKind:
  GAUSSIAN = "gaussian"
  EXPONENTIAL = "exponential"


def _quad_real(f: Callable[[float], float], a: float, b: float, cfg: QuadConfig, points: Optional[Sequence[float]]) -> Tuple[float, float, Optional[str]]:
  inner_points = None
  if points is not None:
    inner_points = sorted(p for p in points if a < p < b)
    inner_points = inner_points if len(inner_points) > 0 else None
  out = integrate.quad(
    f, a, b,
    epsabs=cfg.abs_tol,
    epsrel=cfg.rel_tol,
    limit=cfg.max_depth,
    points=inner_points,
    full_output=1
  )
  message = out[3] if len(out) > 3 else None
  return out[0], out[1], message


def _accept(value: Number, error: float, message: Optional[str], a: float, b: float, cfg: QuadConfig) -> QuadResult:
  if message is not None:
    acceptable = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if not np.isfinite(value) or error > ACCEPTABLE_ERROR_FACTOR * acceptable:
      raise NonConvergent(f"quadrature on [{a}, {b}] stopped: {message}", best=value, estimate=error)
    logging.debug(f"[integrate_finite] accepted [{a}, {b}] with error {error}: {message}")
  return QuadResult(value=value, error=error)


def integrate_finite(
  f: Callable[[float], Number],
  a: float,
  b: float,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  points: Optional[Sequence[float]] = None
) -> QuadResult:
  """
  Adaptive Gauss-Kronrod integral of a real or complex integrand on [a, b].

  Args:
    f: integrand, finite on (a, b); integrable endpoint singularities are fine.
    points: interior break points (kinks, narrow peaks).

  Returns:
    QuadResult with the value and the QUADPACK error estimate. A complex
    integrand is integrated part by part and judged against the modulus of
    the complex result.

  Raises:
    NonConvergent: the subdivision budget (cfg.max_depth) ran out short of the tolerance.
  """
  if a == b:
    return QuadResult(value=0.0, error=0.0)
  midpoint = f(0.5 * (a + b))
  if isinstance(midpoint, complex) or np.iscomplexobj(midpoint):
    re_value, re_error, re_message = _quad_real(lambda x: complex(f(x)).real, a, b, cfg, points)
    im_value, im_error, im_message = _quad_real(lambda x: complex(f(x)).imag, a, b, cfg, points)
    message = re_message if re_message is not None else im_message
    return _accept(complex(re_value, im_value), math.hypot(re_error, im_error), message, a, b, cfg)
  value, error, message = _quad_real(lambda x: float(f(x)), a, b, cfg, points)
  return _accept(value, error, message, a, b, cfg)


def halfline_cutoff(decay_scale: float, cfg: QuadConfig = DEFAULT_QUAD_CONFIG, kind: str = DecayKind.GAUSSIAN) -> float:
  """Point beyond which a bound C exp(-(q/s)^2) or C exp(-q/s) is below abs_tol."""
  log_tol = -math.log(cfg.abs_tol)
  if kind == DecayKind.GAUSSIAN:
    return decay_scale * (math.sqrt(log_tol) + 1.0)
  elif kind == DecayKind.EXPONENTIAL:
    return decay_scale * (log_tol + 2.0)
  else:
    raise ValueError(f"Unknown decay kind {kind}")


def integrate_halfline(
  f: Callable[[float], Number],
  decay_scale: float,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  kind: str = DecayKind.GAUSSIAN,
  points: Optional[Sequence[float]] = None
) -> QuadResult:
  """
  Integral over [0, inf) of an integrand whose decay is bounded by the caller:
  |f(q)| <= C exp(-q^2/s^2) (kind=gaussian) or C exp(-q/s) (kind=exponential).
  The axis is cut where the bound drops below cfg.abs_tol.
  """
  if not decay_scale > 0:
    raise ValueError(f"decay_scale must be positive, got {decay_scale}")
  return integrate_finite(f, 0.0, halfline_cutoff(decay_scale, cfg, kind), cfg=cfg, points=points)


def integrate_line(
  f: Callable[[float], Number],
  decay_scale: float,
  cfg: QuadConfig = DEFAULT_QUAD_CONFIG,
  kind: str = DecayKind.GAUSSIAN,
  points: Optional[Sequence[float]] = None
) -> QuadResult:
  """Integral over the whole real line, split at 0 into two half-lines."""
  positive = integrate_halfline(f, decay_scale, cfg, kind, points=points)
  negative = integrate_halfline(
    lambda q: f(-q), decay_scale, cfg, kind,
    points=None if points is None else [-p for p in points]
  )
  return QuadResult(value=positive.value + negative.value, error=positive.error + negative.error)


def scaled_config(cfg: QuadConfig, magnitude: float) -> QuadConfig:
  """cfg with abs_tol raised to a fixed fraction of the integrand's natural magnitude."""
  return cfg.model_copy(update={"abs_tol": max(cfg.abs_tol, 1e-14 * magnitude)})
