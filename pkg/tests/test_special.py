import math
import unittest
import sys
import os

import numpy as np
from scipy import special

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from landau_kernels.special.bessel import bessel_k, bessel_k_integral
from landau_kernels.special.polynomials import (
  LaguerreSweep, PolyOrder, hermite, laguerre, laguerre_table, legendre_p_zero, legendre_p_zero_even
)
from landau_kernels.utilities.errors import DomainError


class TestPolynomials(unittest.TestCase):

  def test_laguerre_1(self):
    for n in [0, 1, 2, 7, 30]:
      for alpha in [0, 1]:
        for x in [0.0, 0.3, 2.5, 11.0]:
          expected = special.eval_genlaguerre(n, alpha, x)
          self.assertAlmostEqual(laguerre(PolyOrder(n=n, alpha=alpha), x) / max(1.0, abs(expected)), expected / max(1.0, abs(expected)), places=10)

  def test_laguerre_2(self):
    # L_{-1} is zero so that the Lambda_{k-1,k} formulas hold at k = 0
    self.assertEqual(laguerre(PolyOrder(n=-1, alpha=1), 1.7), 0.0)
    self.assertEqual(laguerre(PolyOrder(n=4), 0.0), 1.0)
    self.assertAlmostEqual(laguerre(PolyOrder(n=4, alpha=1), 0.0), 5.0)

  def test_poly_order_1(self):
    with self.assertRaises(ValueError):
      PolyOrder(n=-2)
    with self.assertRaises(ValueError):
      PolyOrder(n=1, alpha=-1)

  def test_hermite_1(self):
    for n in [0, 1, 2, 5, 12]:
      for x in [-1.3, 0.0, 0.4, 2.0]:
        expected = special.eval_hermite(n, x)
        self.assertAlmostEqual(hermite(n, x) / max(1.0, abs(expected)), expected / max(1.0, abs(expected)), places=11)
    self.assertEqual(hermite(-1, 0.5), 0.0)

  def test_legendre_zero_1(self):
    for n in range(0, 40):
      self.assertAlmostEqual(legendre_p_zero(n), special.eval_legendre(n, 0.0), places=12)

  def test_legendre_zero_2(self):
    # Past the product range the value comes from log-gamma
    n = 400
    self.assertAlmostEqual(legendre_p_zero(n) / special.eval_legendre(n, 0.0), 1.0, places=9)
    table = legendre_p_zero_even(50)
    self.assertEqual(len(table), 51)
    self.assertAlmostEqual(table[50], legendre_p_zero(100), places=13)

  def test_laguerre_table_1(self):
    x = 3.2
    values = laguerre_table(x, 1, 25)
    for n in [0, 3, 24]:
      self.assertAlmostEqual(values[n], math.exp(-x / 2) * special.eval_genlaguerre(n, 1, x), places=10)

  def test_laguerre_table_2(self):
    # e^{-x/2} L_n(x) stays finite where e^{-x/2} alone underflows
    values = laguerre_table(2000.0, 0, 2000)
    self.assertTrue(np.all(np.isfinite(values)))
    self.assertTrue(np.max(np.abs(values[1500:])) > 0)

  def test_laguerre_sweep_1(self):
    xs = np.array([0.0, 0.5, 4.0, 30.0])
    sweep = LaguerreSweep(xs, alpha=0)
    for n in range(40):
      values = sweep.step()
      expected = np.exp(-xs / 2) * special.eval_genlaguerre(n, 0, xs)
      np.testing.assert_allclose(values, expected, rtol=1e-9, atol=1e-12)

  def test_laguerre_sweep_2(self):
    sweep = LaguerreSweep(np.array([1.0, 2.0, 3.0]), alpha=1)
    next(sweep)
    sweep.compress(np.array([True, False, True]))
    values = sweep.step()
    np.testing.assert_allclose(values, np.exp(-np.array([1.0, 3.0]) / 2) * special.eval_genlaguerre(1, 1, np.array([1.0, 3.0])))


class TestBessel(unittest.TestCase):

  def test_bessel_k_1(self):
    for x in [1e-6, 0.1, 1.0, 7.5, 40.0]:
      self.assertAlmostEqual(bessel_k(0, x) / special.k0(x), 1.0, places=13)
      self.assertAlmostEqual(bessel_k(1, x) / special.k1(x), 1.0, places=13)

  def test_bessel_k_2(self):
    for x in [0.05, 1.0, 6.0]:
      self.assertAlmostEqual(bessel_k(0, x) / bessel_k_integral(0, x), 1.0, places=9)
      self.assertAlmostEqual(bessel_k(1, x) / bessel_k_integral(1, x), 1.0, places=9)

  def test_bessel_k_3(self):
    values = bessel_k(0, np.array([0.5, 1.0, 800.0]))
    self.assertEqual(values.shape, (3,))
    self.assertEqual(values[2], 0.0)

  def test_bessel_k_domain_1(self):
    with self.assertRaises(DomainError):
      bessel_k(0, 0.0)
    with self.assertRaises(DomainError):
      bessel_k(1, np.array([1.0, -1.0]))
    with self.assertRaises(ValueError):
      bessel_k(2, 1.0)


if __name__ == '__main__':
  unittest.main()
