import math
import random
import unittest
import sys
import os

import numpy as np
from scipy import special

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from landau_kernels.kernel3d.constants import KernelSign
from landau_kernels.kernel3d.field import FieldParams, Point3, tesla_to_beta
from landau_kernels.kernel3d.gamma import gamma_grid, gamma_values, gamma_values_highfield, half_max_radius, level_set_extents
from landau_kernels.kernel3d.kernel_matrix import BETA_HAT, kernel_matrix, sign_prefactor
from landau_kernels.kernel3d.kz_integrals import anger_part, d1, d1_numeric, d2, d3_closed, d3_damped, d3_regular, energy
from landau_kernels.kernel3d.landau import (
  hermite_overlap_closed, hermite_overlap_numeric, lambda_closed, lambda_numeric, sum_rule_reproduction
)
from landau_kernels.quad.datamodel import SeriesPolicy
from landau_kernels.utilities.errors import DomainError, UnsupportedIndexPair


class TestField(unittest.TestCase):

  def test_field_params_1(self):
    fp = FieldParams(beta=2.0)
    self.assertAlmostEqual(fp.L, 1.0 / math.sqrt(2.0))
    self.assertAlmostEqual(fp.eta, 2.0)
    self.assertAlmostEqual(fp.omega, 2.0)
    self.assertAlmostEqual(fp.a(0), 1.0)
    self.assertAlmostEqual(fp.a(3), math.sqrt(13.0))
    np.testing.assert_allclose(fp.a(np.array([0, 3])), [1.0, math.sqrt(13.0)])
    self.assertAlmostEqual(fp.landau_scale(3).a_n, math.sqrt(13.0))

  def test_field_params_2(self):
    for bad in [0.0, -1.0, float("inf")]:
      with self.assertRaises(ValueError):
        FieldParams(beta=bad)
    with self.assertRaises(ValueError):
      FieldParams(beta=1.0).a(-1)

  def test_field_params_3(self):
    fp = FieldParams(beta=5.0, nonrelativistic=True)
    self.assertEqual(fp.a(7), 1.0)
    np.testing.assert_array_equal(fp.a(np.arange(4)), np.ones(4))

  def test_tesla_1(self):
    self.assertAlmostEqual(tesla_to_beta(4.4e9), 1.0)
    self.assertAlmostEqual(FieldParams.from_tesla(1e11).beta, 1e11 / 4.4e9)
    with self.assertRaises(ValueError):
      tesla_to_beta(0.0)

  def test_point_1(self):
    fp = FieldParams(beta=1.0)
    p = Point3(x=0.6, y=-0.8, z=0.1)
    self.assertAlmostEqual(p.rho_bar_sq(fp), 0.5)
    self.assertAlmostEqual(abs(p.r10(fp)) ** 2, p.rho_bar_sq(fp))
    self.assertAlmostEqual(abs(p.r01(fp)) ** 2, p.rho_bar_sq(fp))


class TestKzIntegrals(unittest.TestCase):

  def test_energy_1(self):
    fp = FieldParams(beta=1.0)
    self.assertAlmostEqual(energy(1, 1.0, fp), 2.0)
    with self.assertRaises(DomainError):
      energy(-1, 0.0, fp)

  def test_d1_1(self):
    fp = FieldParams(beta=0.7)
    for n in [0, 1, 4]:
      for zeta in [0.2, -1.1, 3.0]:
        self.assertAlmostEqual(d1(n, zeta, fp) / d1_numeric(n, zeta, fp), 1.0, places=8)
    self.assertAlmostEqual(d1(0, 0.5, fp), special.k0(0.5) / math.pi, places=14)

  def test_d2_1(self):
    fp = FieldParams(beta=3.0)
    for n in [0, 2, 50]:
      self.assertAlmostEqual(d2(n, 0.9, fp) / d1(n, 0.9, fp), fp.eta, places=12)

  def test_d3_1(self):
    fp = FieldParams(beta=1.0)
    for n, zeta in [(0, 0.8), (1, 0.3), (3, -1.2)]:
      closed = d3_closed(n, zeta, fp)
      self.assertAlmostEqual(d3_regular(n, zeta, fp), closed, places=6)
      self.assertAlmostEqual(d3_regular(n, zeta, fp, method="euler"), closed, places=6)
      self.assertLess(abs(d3_damped(n, zeta, fp) - closed), 1e-6, f"n={n} zeta={zeta}")

  def test_d3_3(self):
    # Far from the origin only the exponential Bessel tail survives
    fp = FieldParams(beta=1.0)
    for zeta in [5.0, -5.0]:
      closed = d3_closed(0, zeta, fp)
      self.assertAlmostEqual(closed, math.copysign(special.k1(5.0), zeta), places=14)
      self.assertLess(abs(d3_regular(0, zeta, fp) - closed), 1e-6)
      self.assertLess(abs(d3_damped(0, zeta, fp) - closed), 1e-6)

  def test_d3_2(self):
    # Odd in zeta, 1/zeta near the origin
    fp = FieldParams(beta=1.0)
    self.assertAlmostEqual(d3_closed(2, -0.4, fp), -d3_closed(2, 0.4, fp), places=14)
    self.assertAlmostEqual(d3_closed(0, 1e-4, fp) * 1e-4, 1.0, places=6)
    self.assertAlmostEqual(anger_part(0, 0.5, fp), special.k1(0.5) - 2.0, places=12)

  def test_d_domain_1(self):
    fp = FieldParams(beta=1.0)
    for fn in [d1, d2, d3_closed, d3_regular]:
      with self.assertRaises(DomainError):
        fn(0, 0.0, fp)


class TestLandau(unittest.TestCase):

  def test_lambda_closed_1(self):
    rng = random.Random(7)
    for beta in [0.1, 1.0, 10.0]:
      fp = FieldParams(beta=beta)
      for _ in range(4):
        p1 = Point3(x=rng.uniform(-1, 1), y=rng.uniform(-1, 1), z=0.0)
        p2 = Point3(x=rng.uniform(-1, 1), y=rng.uniform(-1, 1), z=0.0)
        for k in range(0, 9):
          pairs = [(k, k)] + ([(k - 1, k), (k, k - 1)] if k > 0 else [])
          for m, n in pairs:
            expected = lambda_numeric(m, n, p1, p2, fp)
            scale = max(1.0, abs(expected))
            self.assertLess(abs(lambda_closed(m, n, p1, p2, fp) - expected) / scale, 1e-8)

  def test_lambda_closed_2(self):
    fp = FieldParams(beta=1.0)
    p1, p2 = Point3(x=0.1, y=0.2, z=0.0), Point3(x=0.0, y=0.0, z=0.0)
    with self.assertRaises(UnsupportedIndexPair):
      lambda_closed(0, 2, p1, p2, fp)
    self.assertEqual(lambda_closed(-1, 0, p1, p2, fp), 0j)
    # Lambda_{0,0}(r, r) = 1 / L^2
    self.assertAlmostEqual(lambda_closed(0, 0, p1, p1, fp), 1.0 + 0j)

  def test_hermite_overlap_1(self):
    rng = random.Random(11)
    for _ in range(10):
      a, b = rng.uniform(-1, 1), rng.uniform(-1, 1)
      for n in range(0, 7):
        for m in range(0, n + 1):
          expected = hermite_overlap_numeric(m, n, a, b)
          self.assertLess(abs(hermite_overlap_closed(m, n, a, b) - expected) / max(1.0, abs(expected)), 1e-8)
    with self.assertRaises(DomainError):
      hermite_overlap_closed(3, 1, 0.1, 0.2)

  def test_sum_rule_1(self):
    # Test function of width 2L
    fp = FieldParams(beta=1.0)
    points = sum_rule_reproduction([0.0, 0.0], 2.0 * fp.L, [8, 16, 32, 64], fp)
    errors = [p.error for p in points]
    self.assertEqual([p.n_terms for p in points], [8, 16, 32, 64])
    for earlier, later in zip(errors, errors[1:]):
      self.assertLess(later, earlier)
    self.assertLess(errors[-1] / points[-1].target, 1e-2)

  def test_sum_rule_2(self):
    with self.assertRaises(DomainError):
      sum_rule_reproduction([0.0, 0.0], 0.0, [4], FieldParams(beta=1.0))


class TestGamma(unittest.TestCase):

  def test_gamma_grid_1(self):
    fp = FieldParams(beta=1.0)
    grid = gamma_grid([0.2, 0.0], [0.1, 0.0], [0.5, -0.7], fp)
    single = gamma_values(Point3(x=0.2, y=0.1, z=0.5), fp)
    self.assertAlmostEqual(abs(grid.at(0).g1 - single.g1), 0.0, places=14)
    self.assertFalse(bool(np.any(grid.truncated)))
    # On the axis Gamma2 carries a factor rho and vanishes
    self.assertEqual(abs(grid.g2[1]), 0.0)

  def test_gamma_values_1(self):
    # The rho = 0 series reduces to sum_n K0(a_n |z|) / (pi L^2)
    fp = FieldParams(beta=2.0)
    z = 0.6
    g = gamma_values(Point3(x=0.0, y=0.0, z=z), fp, SeriesPolicy(term_tol=1e-14))
    n = np.arange(0, 2000)
    expected = np.sum(special.k0(fp.a(n) * z)) / (math.pi * fp.L2)
    self.assertAlmostEqual(g.g1.real / expected, 1.0, places=8)
    self.assertAlmostEqual(g.g3_delta_coeff, 1.0 / (math.pi * fp.L2 * z))

  def test_gamma_values_2(self):
    with self.assertRaises(DomainError):
      gamma_values(Point3(x=0.1, y=0.0, z=0.0), FieldParams(beta=1.0))

  def test_gamma_values_3(self):
    # The stopping rule falls back to n_max with the truncation flag
    with self.assertLogs(level="WARNING"):
      g = gamma_values(Point3(x=0.1, y=0.0, z=0.01), FieldParams(beta=1e-3), SeriesPolicy(n_max=5))
    self.assertTrue(g.truncated)
    self.assertEqual(g.terms_used, 5)

  def test_high_field_1(self):
    fp = FieldParams(beta=1e4)
    rng = random.Random(3)
    for _ in range(10):
      p = Point3(x=rng.uniform(-2, 2) * fp.L, y=rng.uniform(-2, 2) * fp.L, z=rng.choice([-1, 1]) * rng.uniform(0.2, 2.0))
      full = gamma_values(p, fp)
      single = gamma_values_highfield(p, fp)
      self.assertLess(abs(full.g1 - single.g1) / abs(single.g1), 1e-4)
      self.assertLess(abs(full.g3_regular - single.g3_regular) / abs(single.g3_regular), 1e-4)
      self.assertLess(abs(full.g1_t) / abs(full.g1), 1e-6)

  def test_high_field_2(self):
    with self.assertLogs(level="WARNING"):
      gamma_values_highfield(Point3(x=0.1, y=0.0, z=0.5), FieldParams(beta=0.1))

  def test_gauge_modulus_1(self):
    # Only the phase chi = xy / 2L^2 changes under y -> -y
    fp = FieldParams(beta=0.7)
    for x, y, z in [(0.3, 0.4, 0.2), (-0.8, 0.1, -0.5), (1.2, -0.6, 1.1)]:
      upper = gamma_values(Point3(x=x, y=y, z=z), fp)
      lower = gamma_values(Point3(x=x, y=-y, z=z), fp)
      self.assertLess(abs(abs(upper.g1) / abs(lower.g1) - 1.0), 1e-12)
      self.assertLess(abs(abs(upper.g3_regular) / abs(lower.g3_regular) - 1.0), 1e-12)

  def test_low_field_1(self):
    # In the y = 0 plane Gamma1 is real, positive and falls off along x and along z
    fp = FieldParams(beta=0.01)
    xs = np.linspace(0.05, 3.0, 12)
    along_x = gamma_grid(xs, np.zeros_like(xs), np.full_like(xs, 0.3), fp)
    zs = np.linspace(0.3, 3.0, 12)
    along_z = gamma_grid(np.zeros_like(zs), np.zeros_like(zs), zs, fp)
    for values in [along_x.g1, along_z.g1]:
      self.assertLess(np.max(np.abs(values.imag)), 1e-12 * np.max(np.abs(values)))
      self.assertTrue(np.all(values.real > 0.0))
      self.assertTrue(np.all(np.diff(values.real) < 0.0))

  def test_level_set_1(self):
    x_low, z_low = level_set_extents(FieldParams(beta=1e-2), 0.05)
    self.assertLess(max(x_low, z_low) / min(x_low, z_low), 1.3)
    x_high, z_high = level_set_extents(FieldParams(beta=1e4), 0.05)
    self.assertGreater(z_high / x_high, 3.0)

  def test_half_max_radius_1(self):
    # Transverse width follows L at high field
    low = half_max_radius(FieldParams(beta=1e-2), 0.5)
    high = half_max_radius(FieldParams(beta=1e4), 0.5)
    self.assertLess(high, 0.1 * low)
    self.assertLess(high, 5.0 * FieldParams(beta=1e4).L)


class TestKernelMatrix(unittest.TestCase):

  def test_sign_prefactor_1(self):
    plus, minus = sign_prefactor(KernelSign.PLUS), sign_prefactor(KernelSign.MINUS)
    np.testing.assert_allclose(plus - minus, np.eye(4) / math.sqrt(2.0))
    np.testing.assert_allclose(plus + minus, BETA_HAT / math.sqrt(2.0))
    with self.assertRaises(ValueError):
      sign_prefactor("0")

  def test_kernel_matrix_1(self):
    fp = FieldParams(beta=1.0)
    p = Point3(x=0.4, y=0.0, z=0.5)
    g = gamma_values(p, fp)
    m = kernel_matrix(p, fp, sign=KernelSign.PLUS)
    block = m.block
    np.testing.assert_array_equal(np.diag(block), np.zeros(4))
    self.assertAlmostEqual(abs(block[2, 0] - block[0, 2] - 2j * g.g1_t), 0.0, places=13)
    self.assertAlmostEqual(abs(block[2, 0] + block[0, 2] - 2.0 * g.g3_t_regular), 0.0, places=13)
    np.testing.assert_allclose(m.regular, m.prefactor @ block)
    self.assertEqual(m.delta_diag, 1.0)

  def test_kernel_matrix_2(self):
    # The + kernel keeps the upper rows, the - kernel the lower rows
    fp = FieldParams(beta=1.0)
    p = Point3(x=0.3, y=0.2, z=-0.4)
    plus = kernel_matrix(p, fp, sign=KernelSign.PLUS).regular
    minus = kernel_matrix(p, fp, sign=KernelSign.MINUS).regular
    np.testing.assert_allclose(plus[2:], np.zeros((2, 4)), atol=1e-15)
    np.testing.assert_allclose(minus[:2], np.zeros((2, 4)), atol=1e-15)

  def test_kernel_matrix_3(self):
    # Elements (1, 2), (2, 1), (3, 4) and (4, 3) vanish identically
    fp = FieldParams(beta=3.0)
    for p in [Point3(x=0.3, y=0.2, z=-0.4), Point3(x=-1.1, y=0.5, z=0.9)]:
      for sign in [KernelSign.PLUS, KernelSign.MINUS]:
        block = kernel_matrix(p, fp, sign=sign).block
        for i, j in [(0, 1), (1, 0), (2, 3), (3, 2)]:
          self.assertEqual(block[i, j], 0)
        self.assertNotEqual(block[0, 2], 0)


if __name__ == '__main__':
  unittest.main()
