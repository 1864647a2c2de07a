import math
import unittest

import numpy as np

from hardy_core.quadrature import ZERO, adaptive_gauss_legendre, gauss_legendre


class GaussLegendreTests(unittest.TestCase):
    def test_polynomials_are_exact(self):
        self.assertAlmostEqual(gauss_legendre(lambda xs: xs**7, 0.0, 2.0), 32.0, delta=1e-12)

    def test_adaptive_rule_handles_an_endpoint_singularity(self):
        result = adaptive_gauss_legendre(lambda xs: 1.0 / np.sqrt(xs), 0.0, 1.0, 1e-10)
        self.assertAlmostEqual(result.value, 2.0, delta=1e-8)

    def test_smooth_integrand_reports_small_error(self):
        result = adaptive_gauss_legendre(np.exp, 0.0, 1.0, 1e-12)
        self.assertAlmostEqual(result.value, math.e - 1.0, delta=1e-13)
        self.assertLessEqual(result.error, 1e-12)

    def test_empty_interval(self):
        self.assertEqual(adaptive_gauss_legendre(np.exp, 1.0, 1.0), ZERO)

    def test_infinite_values_propagate(self):
        result = adaptive_gauss_legendre(lambda xs: np.full_like(xs, np.inf), 0.0, 1.0)
        self.assertTrue(math.isinf(result.value))


if __name__ == "__main__":
    unittest.main()
