import math
import unittest
import sys
import os

import numpy as np

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from landau_kernels.kernel3d.constants import MomentMethod, SeriesVariant
from landau_kernels.kernel3d.field import FieldParams
from landau_kernels.moments.moments import (
  appendix_integrals, grid_moment, m_rho0, m_rho_numeric, m_z, m_z_numeric, moment_sums, moment_sums_integral, w1
)
from landau_kernels.quad.datamodel import SeriesPolicy
from landau_kernels.utilities.errors import DomainError


class TestBuildingBlocks(unittest.TestCase):

  def test_m_z_1(self):
    fp = FieldParams(beta=0.5)
    for n in [0, 1, 6]:
      self.assertAlmostEqual(m_z(0, n, fp) / m_z_numeric(0, n, fp), 1.0, places=8)
      self.assertAlmostEqual(m_z(2, n, fp) / m_z_numeric(2, n, fp), 1.0, places=8)
    with self.assertRaises(DomainError):
      m_z(1, 0, fp)

  def test_m_rho_1(self):
    fp = FieldParams(beta=1.0)
    for n in [0, 1, 2, 4, 6]:
      self.assertAlmostEqual(m_rho_numeric(0, n, fp), m_rho0(n), places=8)
    self.assertEqual(m_rho0(3), 0.0)
    self.assertAlmostEqual(m_rho0(0), math.sqrt(2.0), places=14)

  def test_appendix_integrals_1(self):
    first, second = appendix_integrals(1e-4)
    self.assertAlmostEqual(first, 1.0 / math.sqrt(2.0), places=6)
    self.assertAlmostEqual(second, -1.0 / math.sqrt(8.0), places=6)
    first, _ = appendix_integrals(100.0)
    self.assertLess(abs(first - 1.0), 2e-2)
    with self.assertRaises(DomainError):
      appendix_integrals(-1.0)


class TestMomentSums(unittest.TestCase):

  def test_methods_agree_1(self):
    for beta in [1e-3, 1e-1, 1.0, 10.0, 1e3]:
      fp = FieldParams(beta=beta)
      for variant in [SeriesVariant.PLAIN, SeriesVariant.TILDE]:
        direct = moment_sums(fp, variant=variant)
        integral = moment_sums_integral(fp, variant=variant)
        for name in ["s00", "s20", "s02"]:
          self.assertLess(abs(getattr(direct, name) / getattr(integral, name) - 1.0), 1e-6, f"{name} at beta={beta} ({variant})")

  def test_methods_agree_2(self):
    # s02 ~ 2 L^2 is far below the absolute term_tol scale at high field
    fp = FieldParams(beta=1e3)
    direct = moment_sums(fp)
    self.assertLess(direct.s02, 1e-2)
    self.assertLess(abs(direct.s02 / moment_sums_integral(fp).s02 - 1.0), 1e-6)
    self.assertFalse(direct.truncated)

  def test_tightened_1(self):
    # A thousandfold smaller term_tol moves nothing beyond the looser one's accuracy
    fp = FieldParams(beta=0.3)
    policy = SeriesPolicy(term_tol=1e-6)
    loose = moment_sums(fp, policy)
    tight = moment_sums(fp, policy.tightened(1000.0))
    self.assertAlmostEqual(policy.tightened(1000.0).term_tol, 1e-9, places=20)
    for name in ["s00", "s20", "s02"]:
      self.assertLess(abs(getattr(loose, name) / getattr(tight, name) - 1.0), 1e-6, name)

  def test_nonrelativistic_1(self):
    fp = FieldParams(beta=1.0, nonrelativistic=True)
    sums = moment_sums_integral(fp)
    self.assertLess(abs(sums.s02), 1e-10)
    self.assertLess(abs(moment_sums(fp).s02), 1e-10)
    self.assertLess(abs(w1(fp).w1_rho), 1e-10)


class TestW1(unittest.TestCase):

  def test_low_field_1(self):
    result = w1(FieldParams(beta=1e-6))
    self.assertLess(abs(result.w1 / 3.0 - 1.0), 1e-2)

  def test_low_field_2(self):
    # The tilde sums shift a_n to a_{n+1}, which only matters once beta is appreciable
    result = w1(FieldParams(beta=1e-4))
    self.assertLess(abs(result.w1_t - result.w1), 0.02)

  def test_high_field_1(self):
    fp = FieldParams(beta=1e4)
    result = w1(fp)
    self.assertLess(abs(result.w1_z - 1.0), 2e-2)
    self.assertLess(abs(result.w1_rho / (2.0 * fp.L2) - 1.0), 0.2)
    self.assertLess(result.w1_t, 1e-3)

  def test_high_field_2(self):
    # The tilde moments fall off like 1/beta
    w1_t = {beta: w1(FieldParams(beta=beta)).w1_t for beta in [1e3, 1e4]}
    self.assertGreater(w1_t[1e3], 1e-3)
    self.assertLess(w1_t[1e3], 2e-3)
    self.assertLess(abs(w1_t[1e4] * 1e4 / (w1_t[1e3] * 1e3) - 1.0), 0.5)

  def test_w1_1(self):
    result = w1(FieldParams(beta=2.0), method=MomentMethod.DIRECT_SUM)
    self.assertAlmostEqual(result.w1, result.w1_rho + result.w1_z, places=12)
    self.assertEqual(result.method, MomentMethod.DIRECT_SUM)
    with self.assertRaises(ValueError):
      w1(FieldParams(beta=2.0), method="bisection")

  def test_transition_1(self):
    betas = np.logspace(-4, 6, 41)
    results = [w1(FieldParams(beta=b)) for b in betas]
    totals = np.array([r.w1 for r in results])
    self.assertLess(abs(totals[0] / 3.0 - 1.0), 1e-2)
    self.assertLess(abs(totals[-1] - 1.0), 1e-2)
    w1_rho = np.array([r.w1_rho for r in results])
    peak = betas[int(np.argmax(w1_rho))]
    self.assertGreaterEqual(peak, 0.05)
    self.assertLessEqual(peak, 20.0)
    high = betas >= 10.0
    self.assertTrue(np.all(np.diff(w1_rho[high]) <= 1e-12))

  def test_transition_2(self):
    # W1 first rises as 3 + 3 beta: s00 = 1 + beta / 2, s20 = 1 + 3 beta / 2, s02 = 2 + 3 beta
    beta = 1e-3
    result = w1(FieldParams(beta=beta))
    self.assertLess(abs((result.w1 - 3.0) / (3.0 * beta) - 1.0), 0.05)
    self.assertLess(abs((result.w1_z - 1.0) / beta - 1.0), 0.05)

  def test_grid_moment_1(self):
    # Gamma2 is odd under rho -> -rho and Gamma3 is odd in z
    fp = FieldParams(beta=1.0)
    g1 = grid_moment("g1", fp)
    self.assertLess(abs(grid_moment("g2", fp)), 1e-10 * abs(g1))
    self.assertLess(abs(grid_moment("g3_regular", fp)), 1e-10 * abs(g1))
    with self.assertRaises(DomainError):
      grid_moment("g1", fp, nodes=7)


if __name__ == '__main__':
  unittest.main()
