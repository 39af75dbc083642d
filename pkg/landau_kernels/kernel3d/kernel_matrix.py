import math
from dataclasses import dataclass

import numpy as np

from landau_kernels.kernel3d.constants import KernelSign
from landau_kernels.kernel3d.field import FieldParams, Point3
from landau_kernels.kernel3d.gamma import GammaValues, gamma_values
from landau_kernels.quad.datamodel import SeriesPolicy
from landau_kernels.quad.series import DEFAULT_SERIES_POLICY

# beta-hat = diag(1, 1, -1, -1)
BETA_HAT = np.diag([1.0, 1.0, -1.0, -1.0])


def sign_prefactor(sign: str) -> np.ndarray:
  """(beta-hat +/- 1) / (2 sqrt 2)"""
  if sign == KernelSign.PLUS:
    return (BETA_HAT + np.eye(4)) / (2.0 * math.sqrt(2.0))
  elif sign == KernelSign.MINUS:
    return (BETA_HAT - np.eye(4)) / (2.0 * math.sqrt(2.0))
  else:
    raise ValueError(f"Unknown kernel sign {sign}")


@dataclass(frozen=True)
class KernelMatrix:
  """
  K(r, 0) = prefactor @ (delta_diag delta(r) 1 + block).

  `block` is the regular part before the constant prefactor (zero diagonal);
  `regular` = prefactor @ block.
  """
  block: np.ndarray
  regular: np.ndarray
  prefactor: np.ndarray
  delta_diag: float
  sign: str
  truncated: bool = False


def assemble_block(g: GammaValues) -> np.ndarray:
  return np.array([
    [0, 0, g.g3_t_regular - 1j * g.g1_t, -g.g2_t],
    [0, 0, -g.g2, -g.g3_regular - 1j * g.g1],
    [g.g3_t_regular + 1j * g.g1_t, -g.g2_t, 0, 0],
    [-g.g2, -g.g3_regular + 1j * g.g1, 0, 0]
  ], dtype=complex)


def kernel_matrix_from_gamma(g: GammaValues, sign: str) -> KernelMatrix:
  prefactor = sign_prefactor(sign)
  block = assemble_block(g)
  return KernelMatrix(
    block=block,
    regular=prefactor @ block,
    prefactor=prefactor,
    delta_diag=1.0,
    sign=sign,
    truncated=g.truncated
  )


def kernel_matrix(
  p: Point3,
  fp: FieldParams,
  policy: SeriesPolicy = DEFAULT_SERIES_POLICY,
  sign: str = KernelSign.PLUS
) -> KernelMatrix:
  return kernel_matrix_from_gamma(gamma_values(p, fp, policy), sign)
