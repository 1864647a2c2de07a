import unittest

import numpy as np

from hardy_core.dist_core import (
    Atom,
    Distribution,
    PNormParam,
    Segment,
    StepFunction,
    cdf,
    compose_quantile,
    galois_holds,
    galois_holds_array,
    integrate,
    is_monotone_on,
    quantile,
    quantile_cells,
    sample,
)
from hardy_core.errors import DomainError, InputError
from hardy_core.suite import case_rng, random_distribution


def mixed_law() -> Distribution:
    return Distribution.from_components(atoms=[(0.0, 0.5)], segments=[(1.0, 2.0, 0.5)])


def two_atoms() -> Distribution:
    return Distribution.from_components(atoms=[(0.0, 0.5), (1.0, 0.5)])


class CdfTests(unittest.TestCase):
    def test_right_and_left_limits_at_an_atom(self):
        d = mixed_law()
        self.assertEqual(cdf(d, 0.0), 0.5)
        self.assertEqual(cdf(d, 0.0, "left"), 0.0)

    def test_inside_a_segment(self):
        self.assertAlmostEqual(cdf(mixed_law(), 1.5), 0.75, places=15)

    def test_below_and_above_support(self):
        d = mixed_law()
        self.assertEqual(cdf(d, -10.0), 0.0)
        self.assertEqual(cdf(d, 10.0), 1.0)

    def test_monotone_on_a_grid(self):
        d = random_distribution(case_rng(3, 1))
        values = [cdf(d, x) for x in np.linspace(-5.0, 25.0, 400)]
        self.assertTrue(all(a <= b for a, b in zip(values, values[1:])))


class QuantileTests(unittest.TestCase):
    def test_infimum_picks_the_lower_atom(self):
        self.assertEqual(quantile(two_atoms(), 0.5), 0.0)
        self.assertEqual(quantile(two_atoms(), 0.75), 1.0)

    def test_inside_a_segment(self):
        self.assertAlmostEqual(quantile(mixed_law(), 0.6), 1.2, places=12)

    def test_levels_outside_unit_interval_are_rejected(self):
        for u in (0.0, -0.1, 1.5):
            with self.assertRaises(DomainError):
                quantile(mixed_law(), u)

    def test_galois_inequalities_on_random_laws(self):
        for case in range(50):
            rng = case_rng(11, case)
            d = random_distribution(rng)
            for u in 1.0 - rng.random(20):
                self.assertTrue(galois_holds(d, float(u)), msg=f"u={u} {d.to_dict()}")

    def test_vectorized_galois_matches_the_scalar_check(self):
        for case in range(20):
            rng = case_rng(12, case)
            d = random_distribution(rng)
            levels = np.concatenate([1.0 - rng.random(500), [1.0]])
            holds = galois_holds_array(d, levels)
            self.assertTrue(bool(np.all(holds)), msg=d.to_dict())
            self.assertEqual(
                list(holds[:25]), [galois_holds(d, float(u)) for u in levels[:25]]
            )


class IntegrateTests(unittest.TestCase):
    def test_constant_one_is_total_mass(self):
        d = random_distribution(case_rng(5, 2))
        self.assertAlmostEqual(integrate(d, StepFunction.constant(1.0)).value, 1.0, places=9)

    def test_callable_against_uniform_density(self):
        result = integrate(Distribution.uniform(), lambda xs: xs**2)
        self.assertAlmostEqual(result.value, 1.0 / 3.0, delta=1e-10)
        self.assertLessEqual(result.error, 1e-10)

    def test_atomic_law_is_the_finite_sum(self):
        d = Distribution.from_components(atoms=[(1.0, 0.5), (3.0, 0.5)])
        psi = StepFunction((2.0,), (1.0, 3.0))
        self.assertEqual(integrate(d, psi, absolute=True).value, 2.0)
        expected = 0.0
        for atom in d.atoms:
            expected += atom.mass * psi(atom.x) ** 2.5
        self.assertAlmostEqual(integrate(d, psi, power=2.5).value, expected, places=12)


class SampleTests(unittest.TestCase):
    def test_same_seed_gives_identical_draws(self):
        d = mixed_law()
        np.testing.assert_array_equal(sample(d, 9, 1000), sample(d, 9, 1000))

    def test_degenerate_law(self):
        self.assertEqual(list(sample(Distribution.point(7.0), 3, 5)), [7.0] * 5)

    def test_uniform_mean(self):
        draws = sample(Distribution.uniform(), 42, 10**6)
        self.assertLess(abs(float(np.mean(draws)) - 0.5), 0.002)

    def test_rejects_empty_sample(self):
        with self.assertRaises(DomainError):
            sample(mixed_law(), 0, 0)

    def test_rejects_negative_seed(self):
        with self.assertRaises(DomainError) as ctx:
            sample(mixed_law(), -1, 10)
        self.assertEqual(ctx.exception.field, "seed")


class ValidationTests(unittest.TestCase):
    def test_mass_must_sum_to_one(self):
        payload = {
            "atoms": [{"x": 0.0, "mass": 0.4}],
            "segments": [{"lo": 1.0, "hi": 2.0, "mass": 0.5}],
        }
        with self.assertRaises(InputError) as ctx:
            Distribution.from_dict(payload)
        self.assertEqual(ctx.exception.field, "mass")
        self.assertIn("0.9", str(ctx.exception))

    def test_unsorted_atoms_are_rejected(self):
        payload = {"atoms": [{"x": 1.0, "mass": 0.5}, {"x": 0.0, "mass": 0.5}]}
        with self.assertRaises(InputError) as ctx:
            Distribution.from_dict(payload)
        self.assertEqual(ctx.exception.field, "atoms[1].x")

    def test_overlapping_segments_are_rejected(self):
        with self.assertRaises(InputError):
            Distribution.from_components(segments=[(0.0, 1.0, 0.5), (0.5, 2.0, 0.5)])

    def test_atom_inside_segment_is_rejected(self):
        with self.assertRaises(InputError):
            Distribution.from_components(atoms=[(0.5, 0.5)], segments=[(0.0, 1.0, 0.5)])

    def test_atom_on_segment_endpoint_is_allowed(self):
        d = Distribution.from_components(atoms=[(1.0, 0.5)], segments=[(0.0, 1.0, 0.5)])
        self.assertEqual([type(piece) for piece in d.pieces], [Segment, Atom])

    def test_unknown_fields_are_rejected(self):
        with self.assertRaises(InputError) as ctx:
            Distribution.from_dict({"atoms": [], "segments": [], "weights": []})
        self.assertEqual(ctx.exception.field, "weights")

    def test_step_function_value_count(self):
        with self.assertRaises(InputError):
            StepFunction.from_dict({"breakpoints": [1.0, 2.0], "values": [3.0, 1.0]})

    def test_step_function_round_trip_with_points(self):
        payload = {
            "breakpoints": [1.0, 2.0],
            "values": [3.0, 1.0, 0.0],
            "points": [{"x": 1.0, "value": 7.0}],
        }
        psi = StepFunction.from_dict(payload)
        self.assertEqual(psi(1.0), 7.0)
        self.assertEqual(psi(1.5), 1.0)
        self.assertEqual(psi.to_dict(), payload)

    def test_p_regimes(self):
        self.assertEqual(PNormParam(2.0).regime, "gt1")
        self.assertEqual(PNormParam(0.5).regime, "lt1")
        self.assertEqual(PNormParam(1.0).regime, "eq1")
        with self.assertRaises(DomainError):
            PNormParam(0.0)
        with self.assertRaises(DomainError):
            PNormParam(1.0).require("gt1", "lt1")


class CellTests(unittest.TestCase):
    def test_cells_split_segments_at_psi_breakpoints(self):
        d = mixed_law()
        psi = StepFunction((1.5,), (2.0, 1.0))
        cells = quantile_cells(d, psi)
        self.assertEqual([cell.atom for cell in cells], [True, False, False])
        self.assertEqual([cell.value for cell in cells], [2.0, 2.0, 1.0])
        self.assertAlmostEqual(cells[1].u1, 0.75, places=15)
        self.assertEqual(cells[-1].u1, 1.0)

    def test_compose_quantile_on_two_atoms(self):
        chi = compose_quantile(two_atoms(), StepFunction((0.5,), (1.0, 0.0)))
        self.assertEqual(chi.piece_value(0.25), 1.0)
        self.assertEqual(chi.piece_value(0.75), 0.0)
        self.assertEqual(chi.piece_value(-1.0), 0.0)
        self.assertEqual(chi.piece_value(2.0), 0.0)

    def test_canonical_merges_equal_density_neighbours(self):
        d = Distribution.from_components(segments=[(0.0, 1.0, 0.5), (1.0, 2.0, 0.5)])
        self.assertEqual(d.canonical().segments, (Segment(0.0, 2.0, 1.0),))

    def test_monotonicity_is_checked_along_the_support(self):
        d = mixed_law()
        self.assertTrue(is_monotone_on(d, StepFunction((0.5,), (3.0, 1.0)), "nonincreasing"))
        self.assertFalse(is_monotone_on(d, StepFunction((0.5,), (1.0, 3.0)), "nonincreasing"))
        # Values off the support do not matter.
        self.assertTrue(
            is_monotone_on(d, StepFunction((-5.0, -1.0), (0.0, 9.0, 1.0)), "nondecreasing")
        )


if __name__ == "__main__":
    unittest.main()
