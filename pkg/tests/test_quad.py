import math
import unittest
import sys
import os

import numpy as np
from scipy import special

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy
from landau_kernels.quad.integrate import DecayKind, halfline_cutoff, integrate_finite, integrate_halfline, integrate_line
from landau_kernels.quad.oscillatory import (
  abel_damped_extrapolation, euler_transform, oscillatory_abel, richardson_extrapolate, wynn_epsilon
)
from landau_kernels.quad.series import abel_richardson_sum, stop_index, sum_series, sum_series_array
from landau_kernels.utilities.errors import DomainError, NonConvergent


class TestIntegrate(unittest.TestCase):

  def test_integrate_finite_1(self):
    result = integrate_finite(math.sin, 0.0, math.pi)
    self.assertAlmostEqual(result.value, 2.0, places=12)
    self.assertEqual(integrate_finite(math.sin, 1.0, 1.0).value, 0.0)

  def test_integrate_finite_2(self):
    # Complex integrands are integrated part by part
    result = integrate_finite(lambda x: complex(math.cos(x), math.sin(x)), 0.0, math.pi / 2)
    self.assertAlmostEqual(result.value.real, 1.0, places=12)
    self.assertAlmostEqual(result.value.imag, 1.0, places=12)

  def test_integrate_finite_3(self):
    with self.assertRaises(NonConvergent):
      integrate_finite(lambda x: math.sin(1.0 / x) / x, 1e-6, 1.0, cfg=QuadConfig(max_depth=2, rel_tol=1e-14, abs_tol=1e-16))

  def test_integrate_halfline_1(self):
    result = integrate_halfline(lambda q: math.exp(-q * q), decay_scale=1.0)
    self.assertAlmostEqual(result.value, math.sqrt(math.pi) / 2, places=12)
    result = integrate_halfline(lambda q: math.exp(-q / 3.0), decay_scale=3.0, kind=DecayKind.EXPONENTIAL)
    self.assertAlmostEqual(result.value, 3.0, places=10)

  def test_integrate_line_1(self):
    result = integrate_line(lambda q: q * q * math.exp(-q * q / 2.0), decay_scale=math.sqrt(2.0))
    self.assertAlmostEqual(result.value, math.sqrt(2.0 * math.pi), places=10)

  def test_halfline_cutoff_1(self):
    cfg = QuadConfig(abs_tol=1e-14)
    self.assertGreater(math.exp(-halfline_cutoff(1.0, cfg) ** 2), 0.0)
    self.assertLess(math.exp(-halfline_cutoff(1.0, cfg) ** 2), 1e-14)
    with self.assertRaises(ValueError):
      halfline_cutoff(1.0, cfg, kind="cauchy")

  def test_quad_config_1(self):
    with self.assertRaises(ValueError):
      QuadConfig(rel_tol=0.0)
    with self.assertRaises(ValueError):
      QuadConfig(max_depth=0)


class TestAccelerators(unittest.TestCase):

  def test_wynn_epsilon_1(self):
    # log 2 = 1 - 1/2 + 1/3 - ...
    partial_sums = np.cumsum([(-1) ** k / (k + 1) for k in range(20)])
    estimate, error = wynn_epsilon(partial_sums)
    self.assertAlmostEqual(estimate, math.log(2.0), places=10)
    self.assertLess(error, 1e-8)

  def test_wynn_epsilon_2(self):
    estimate, error = wynn_epsilon([1.0, 1.0, 1.0, 1.0])
    self.assertEqual(estimate, 1.0)
    self.assertEqual(error, 0.0)
    with self.assertRaises(ValueError):
      wynn_epsilon([])

  def test_euler_transform_1(self):
    partial_sums = np.cumsum([(-1) ** k / (2 * k + 1) for k in range(40)])
    estimate, _ = euler_transform(partial_sums, depth=12)
    self.assertAlmostEqual(estimate, math.pi / 4, places=7)

  def test_richardson_extrapolate_1(self):
    steps = [0.4, 0.2, 0.1, 0.05]
    values = [2.0 + 3.0 * h - h * h for h in steps]
    estimate, error = richardson_extrapolate(steps, values)
    self.assertAlmostEqual(estimate, 2.0, places=12)
    self.assertLess(error, 1e-10)
    with self.assertRaises(ValueError):
      richardson_extrapolate([0.1, 0.2], [1.0])

  def test_oscillatory_abel_1(self):
    # Abel value of int_0^inf k sin(kz) / sqrt(1 + k^2) dk is K1(|z|) sign(z)
    g = lambda k: k / math.sqrt(1.0 + k * k)
    for zeta in [0.7, -1.5]:
      self.assertAlmostEqual(oscillatory_abel(g, zeta), math.copysign(special.k1(abs(zeta)), zeta), places=6)
    self.assertAlmostEqual(oscillatory_abel(g, 0.7, method="euler"), special.k1(0.7), places=6)

  def test_oscillatory_abel_2(self):
    # g = 1: the Abel value of int sin(kz) dk is 1/z
    self.assertAlmostEqual(oscillatory_abel(lambda k: 1.0, 2.0), 0.5, places=8)
    with self.assertRaises(DomainError):
      oscillatory_abel(lambda k: 1.0, 0.0)

  def test_oscillatory_abel_3(self):
    # Odd in zeta and linear in g
    g = lambda k: k / math.sqrt(4.0 + k * k)
    h = lambda k: 1.0 - 4.0 / (4.0 + k * k)
    for zeta in [0.3, 1.7]:
      self.assertEqual(oscillatory_abel(g, -zeta), -oscillatory_abel(g, zeta))
      combined = oscillatory_abel(lambda k: 2.0 * g(k) - 0.5 * h(k), zeta)
      self.assertAlmostEqual(combined, 2.0 * oscillatory_abel(g, zeta) - 0.5 * oscillatory_abel(h, zeta), places=6)

  def test_abel_damped_extrapolation_1(self):
    g = lambda k: k / math.sqrt(1.0 + k * k)
    for zeta in [0.9, 0.2, -3.0]:
      value, _ = abel_damped_extrapolation(g, zeta)
      self.assertLess(abs(value - math.copysign(special.k1(abs(zeta)), zeta)), 1e-6, f"zeta={zeta}")


class TestSeries(unittest.TestCase):

  def test_series_policy_1(self):
    with self.assertRaises(ValueError):
      SeriesPolicy(term_tol=-1.0)
    with self.assertRaises(ValueError):
      SeriesPolicy(n_max=0)
    policy = SeriesPolicy(term_tol=1e-6)
    self.assertAlmostEqual(policy.tightened(10.0).term_tol, 1e-7)

  def test_sum_series_1(self):
    result = sum_series(lambda n: 0.5 ** n, SeriesPolicy(term_tol=1e-12))
    self.assertAlmostEqual(result.value, 2.0, places=11)
    self.assertFalse(result.truncated)

  def test_sum_series_2(self):
    # Harmonic series never meets the rule
    with self.assertLogs(level="WARNING"):
      result = sum_series(lambda n: 1.0 / (n + 1), SeriesPolicy(term_tol=1e-9, n_max=100))
    self.assertTrue(result.truncated)
    self.assertEqual(result.terms_used, 100)

  def test_sum_series_3(self):
    # Small leading terms do not stop the sum before min_terms
    terms = lambda n: 1e-12 if n < 5 else (0.5 ** (n - 5))
    early = sum_series(terms, SeriesPolicy(term_tol=1e-6, consecutive_below=3))
    late = sum_series(terms, SeriesPolicy(term_tol=1e-6, consecutive_below=3), min_terms=5)
    self.assertLess(early.value, 1e-10)
    self.assertAlmostEqual(late.value, 2.0, places=5)

  def test_stop_index_1(self):
    magnitudes = np.array([1.0, 1e-9, 1.0, 1e-9, 1e-9, 1e-9, 1.0])
    self.assertEqual(stop_index(magnitudes, SeriesPolicy(term_tol=1e-6, consecutive_below=3)), (6, False))
    self.assertEqual(stop_index(magnitudes[:5], SeriesPolicy(term_tol=1e-6, consecutive_below=3)), (5, True))
    self.assertEqual(stop_index(magnitudes, SeriesPolicy(term_tol=1e-6, consecutive_below=3), min_terms=4), (7, True))

  def test_sum_series_array_1(self):
    terms = [(-1) ** k / (k + 1) for k in range(400)]
    result = sum_series_array(terms, SeriesPolicy(term_tol=1e-8, n_max=400), alternating=True)
    self.assertAlmostEqual(result.value, math.log(2.0), places=7)
    self.assertFalse(result.truncated)

  def test_abel_richardson_sum_1(self):
    # Grandi's series has Abel sum 1/2
    terms = np.array([(-1.0) ** k for k in range(200_000)])
    result = abel_richardson_sum(terms)
    self.assertAlmostEqual(result.value, 0.5, places=6)
    self.assertFalse(result.truncated)

  def test_sum_series_array_2(self):
    # sum_n P_n(0) = 1/sqrt(2) from the generating function at t = 1
    terms = special.eval_legendre(np.arange(0, 4000, 2), 0.0)
    result = sum_series_array(terms, SeriesPolicy(term_tol=1e-9, n_max=2000), alternating=True)
    self.assertLess(abs(result.value - 1.0 / math.sqrt(2.0)), 1e-6)
    self.assertFalse(result.truncated)


if __name__ == '__main__':
  unittest.main()
