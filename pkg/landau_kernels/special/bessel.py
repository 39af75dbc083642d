import math
from typing import Union

import numpy as np
from scipy import integrate, special

from landau_kernels.utilities.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def bessel_k(order: int, x: ArrayLike) -> ArrayLike:
  """
  Modified Bessel function of the second kind K_0 or K_1.

  Args:
    order (int): 0 or 1.
    x (float or ndarray): strictly positive argument(s).

  Returns:
    K_order(x). Values beyond the exponential range underflow to 0.
  """
  x_array = np.asarray(x, dtype=float)
  if np.any(~(x_array > 0)):
    raise DomainError(f"bessel_k requires x > 0, got min(x) = {np.min(x_array)}")
  if order == 0:
    value = special.k0(x_array)
  elif order == 1:
    value = special.k1(x_array)
  else:
    raise ValueError(f"bessel_k supports orders 0 and 1, got {order}")
  return float(value) if np.ndim(x) == 0 else value


def bessel_k_integral(order: int, x: float) -> float:
  """
  Slow reference value K_order(x) = int_0^inf exp(-x cosh t) cosh(order t) dt.
  """
  if not x > 0:
    raise DomainError(f"bessel_k_integral requires x > 0, got {x}")
  # exp(-x cosh t) < 1e-300 beyond this t
  t_max = math.acosh(max(1.0, 700.0 / x)) + 1.0
  value, _ = integrate.quad(
    lambda t: math.exp(-x * math.cosh(t)) * math.cosh(order * t),
    0.0, t_max, epsabs=0.0, epsrel=1e-13, limit=200
  )
  return value
