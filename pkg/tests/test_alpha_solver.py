import math
import unittest

from hardy_core.alpha_solver import (
    alpha_closed_p2,
    root_function,
    solve_alpha,
    solve_alpha_moments,
)
from hardy_core.dist_core import Distribution, StepFunction
from hardy_core.errors import DomainError, PreconditionError, TrivialRegimeError


def two_atom_law() -> Distribution:
    return Distribution.from_components(atoms=[(0.0, 0.5), (1.0, 0.5)])


class SolveAlphaTests(unittest.TestCase):
    def test_constant_psi_gives_alpha_one(self):
        for p in (1.5, 2.0, 3.0):
            root = solve_alpha(Distribution.uniform(), StepFunction.constant(1.0), p)
            self.assertEqual(root.alpha, 1.0)
            self.assertAlmostEqual(root.sharpened_constant, 1.0, places=15)

    def test_two_values_one_and_three(self):
        psi = StepFunction((0.5,), (1.0, 3.0))
        root = solve_alpha(two_atom_law(), psi, 2.0)
        self.assertAlmostEqual(root.alpha, (3.0 - math.sqrt(5.0)) / 2.0, delta=1e-12)
        self.assertLessEqual(abs(root.residual), 1e-12)

    def test_indicator_of_the_lower_atom(self):
        psi = StepFunction((0.5,), (1.0, 0.0))
        root = solve_alpha(two_atom_law(), psi, 2.0)
        self.assertAlmostEqual(root.alpha, 3.0 - 2.0 * math.sqrt(2.0), delta=1e-12)
        self.assertAlmostEqual(root.alpha, 0.171573, places=6)
        sharpened = root.sharpened_constant * root.mp
        self.assertAlmostEqual(sharpened, 1.2071068, places=6)

    def test_closed_form_agrees_with_root_at_p_two(self):
        law = Distribution.from_components(atoms=[(0.0, 0.2), (1.0, 0.3), (2.0, 0.5)])
        psi = StepFunction((0.5, 1.5), (2.5, 0.4, 1.7))
        self.assertAlmostEqual(
            solve_alpha(law, psi, 2.0).alpha, alpha_closed_p2(law, psi), delta=1e-10
        )

    def test_root_lies_in_unit_interval_with_sign_change(self):
        m1, mp, p = 1.3, 2.9, 3.5
        root = solve_alpha_moments(m1, mp, p)
        g = root_function(m1, mp, p)
        self.assertGreater(g(0.0), 0.0)
        self.assertLessEqual(g(1.0), 0.0)
        self.assertTrue(0.0 <= root.alpha <= 1.0)
        self.assertLessEqual(abs(g(root.alpha)), 1e-12 * max(1.0, m1))

    def test_invariant_under_scaling_psi(self):
        psi = StepFunction((0.5,), (1.0, 3.0))
        base = solve_alpha(two_atom_law(), psi, 2.5).alpha
        for factor in (0.01, 7.0, 1e4):
            scaled = solve_alpha(two_atom_law(), psi.scaled(factor), 2.5).alpha
            self.assertAlmostEqual(scaled, base, delta=1e-12)

    def test_signed_psi_uses_magnitudes(self):
        signed = StepFunction((0.5,), (-1.0, 3.0))
        positive = StepFunction((0.5,), (1.0, 3.0))
        self.assertEqual(
            solve_alpha(two_atom_law(), signed, 2.0).alpha,
            solve_alpha(two_atom_law(), positive, 2.0).alpha,
        )

    def test_convexity_of_root_function(self):
        g = root_function(1.0, 2.0, 1.7)
        for a1, a2, t in ((0.0, 1.0, 0.5), (0.1, 0.9, 0.25), (0.3, 0.35, 0.8)):
            mid = g(t * a1 + (1.0 - t) * a2)
            self.assertLessEqual(mid, t * g(a1) + (1.0 - t) * g(a2) + 1e-12)


class SolveAlphaErrorTests(unittest.TestCase):
    def test_p_at_most_one_is_a_domain_error(self):
        with self.assertRaises(DomainError):
            solve_alpha(Distribution.uniform(), StepFunction.constant(1.0), 1.0)

    def test_vanishing_psi_has_no_root(self):
        with self.assertRaises(PreconditionError):
            solve_alpha(Distribution.uniform(), StepFunction.constant(0.0), 2.0)

    def test_infinite_norm_is_trivial(self):
        with self.assertRaises(TrivialRegimeError):
            solve_alpha_moments(1.0, math.inf, 2.0)


if __name__ == "__main__":
    unittest.main()
