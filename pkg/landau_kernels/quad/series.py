import logging
from typing import Callable, Sequence, Tuple

import numpy as np

from landau_kernels.quad.datamodel import Number, SeriesPolicy, SeriesResult
from landau_kernels.quad.oscillatory import euler_transform, richardson_extrapolate

DEFAULT_SERIES_POLICY = SeriesPolicy()

# Abel parameters t = exp(-sigma) used when a Landau sum converges too slowly
DEFAULT_ABEL_SIGMAS = (1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4)
EULER_DEPTH = 10


def sum_series(
  term: Callable[[int], Number],
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  start: int = 0,
  min_terms: int = 0
) -> SeriesResult:
  """
  Sums term(start) + term(start + 1) + ... under the stopping rule of `policy`.

  Args:
    term: the n-th term of the series.
    min_terms: sub-threshold terms among the first `min_terms` do not count
      towards the stop (Laguerre factors are exponentially small below their
      turning point and only grow afterwards).

  Returns:
    SeriesResult. `truncated` is set when n_max terms were used without
    meeting the stopping rule.
  """
  total = 0.0
  below = 0
  used = 0
  while used < policy.n_max:
    value = term(start + used)
    total += value
    used += 1
    if abs(value) < policy.term_tol and used > min_terms:
      below += 1
      if below >= policy.consecutive_below:
        return SeriesResult(value=total, terms_used=used, truncated=False)
    else:
      below = 0
  logging.warning(f"[sum_series] stopped at n_max={policy.n_max} with last term {abs(value):.3g}")
  return SeriesResult(value=total, terms_used=used, truncated=True, error=float(abs(value)))


def stop_index(magnitudes: np.ndarray, policy: SeriesPolicy = DEFAULT_SERIES_POLICY, min_terms: int = 0) -> Tuple[int, bool]:
  """
  Number of terms the stopping rule keeps from a precomputed array of |term|.

  Returns:
    (terms_used, truncated)
  """
  magnitudes = np.asarray(magnitudes)[:policy.n_max]
  below = magnitudes < policy.term_tol
  below[:min_terms] = False
  run = policy.consecutive_below
  if len(below) >= run:
    # windows[i] counts the sub-threshold terms among i .. i + run - 1
    windows = np.convolve(below.astype(int), np.ones(run, dtype=int), mode="valid")
    hits = np.flatnonzero(windows == run)
    if len(hits) > 0:
      return int(hits[0]) + run, False
  return len(magnitudes), True


def sum_series_array(
  terms: Sequence[Number],
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  alternating: bool = False,
  min_terms: int = 0
) -> SeriesResult:
  """
  The stopping rule of sum_series applied to precomputed terms.

  With alternating=True the final partial sums go through the Euler transform,
  and the result counts as converged when the transform's change is below
  term_tol even if individual terms are not.
  """
  terms = np.asarray(terms)
  used, truncated = stop_index(np.abs(terms), policy, min_terms=min_terms)
  partial_sums = np.cumsum(terms[:used])
  if not alternating:
    if truncated:
      logging.warning(f"[sum_series_array] stopped at n_max={used} with last term {abs(terms[used - 1]):.3g}")
    error = float(abs(terms[used - 1])) if truncated else 0.0
    return SeriesResult(value=partial_sums[-1].item(), terms_used=used, truncated=truncated, error=error)

  value, error = euler_transform(partial_sums, depth=EULER_DEPTH)
  truncated = truncated and error > policy.term_tol
  if truncated:
    logging.warning(f"[sum_series_array] Euler transform stalled at n={used}: change {error:.3g}")
  return SeriesResult(value=np.asarray(value).item(), terms_used=used, truncated=truncated, error=error)


def abel_richardson_sum(
  terms: Sequence[Number],
  sigmas: Sequence[float] = DEFAULT_ABEL_SIGMAS,
  tol: float = 1e-6
) -> SeriesResult:
  """
  Abel means A(sigma) = sum_n terms[n] exp(-sigma n) on a ladder of sigma,
  extrapolated to sigma -> 0 by Neville's scheme.

  The terms array must be long enough for exp(-min(sigmas) * len(terms)) to be
  negligible; `truncated` flags an extrapolation whose last correction exceeds tol.
  """
  terms = np.asarray(terms)
  n = np.arange(len(terms), dtype=float)
  means = [np.sum(terms * np.exp(-sigma * n)) for sigma in sigmas]
  value, error = richardson_extrapolate(sigmas, means)
  scale = max(1.0, abs(value))
  truncated = error > tol * scale
  if truncated:
    logging.warning(f"[abel_richardson_sum] extrapolation error {error:.3g} over {len(terms)} terms")
  return SeriesResult(value=np.asarray(value).item(), terms_used=len(terms), truncated=truncated, error=error)
