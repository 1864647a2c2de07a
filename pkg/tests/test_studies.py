import math
import unittest

from hardy_core.dist_core import StepFunction
from hardy_core.errors import DomainError, PreconditionError
from hardy_core.functionals import SequenceInput
from hardy_core.studies import LimitRow, limit_study, limit_study_integral

UNIT_INDICATOR = StepFunction((0.0, 1.0), (0.0, 1.0, 0.0))


class SequenceLimitTests(unittest.TestCase):
    def test_single_term_approaches_the_basel_sum(self):
        rows = limit_study(SequenceInput((1.0,)), 2.0, [10, 100, 1000])
        self.assertEqual([row.K for row in rows], [10, 100, 1000])
        for row in rows:
            self.assertGreater(row.gap_to_classic, 0.0)
            self.assertLess(row.gap_to_classic, 1.0 / row.K)
        self.assertAlmostEqual(rows[-1].scaled_lhs, math.pi**2 / 6.0, delta=1e-3)

    def test_alpha_shrinks_like_one_over_k(self):
        rows = limit_study(SequenceInput((1.0,)), 2.0, [10, 100, 1000])
        alphas = [row.alpha_K for row in rows]
        self.assertTrue(all(alpha is not None for alpha in alphas))
        self.assertTrue(all(a > b for a, b in zip(alphas, alphas[1:])))  # type: ignore[operator]
        for row in rows:
            self.assertLess(row.alpha_K, 10.0 / row.K)

    def test_scaled_rhs_tends_to_the_classic_constant(self):
        rows = limit_study(SequenceInput((1.0,)), 2.0, [10_000])
        self.assertAlmostEqual(rows[0].scaled_rhs, 4.0, delta=1e-3)

    def test_lt1_matches_the_sequence_form(self):
        seq = SequenceInput((1.0, 0.5, 0.25))
        rows = limit_study(seq, 0.5, [4, 50, 1000])
        for row in rows:
            self.assertIsNone(row.alpha_K)
            self.assertLessEqual(abs(row.gap_to_classic), 1e-9)

    def test_k_shorter_than_the_sequence_is_rejected(self):
        with self.assertRaises(PreconditionError):
            limit_study(SequenceInput((1.0, 2.0, 3.0)), 2.0, [1])
        with self.assertRaises(PreconditionError):
            limit_study(SequenceInput((1.0, 2.0, 3.0)), 0.5, [3])

    def test_trailing_zeros_do_not_count_towards_the_length(self):
        rows = limit_study(SequenceInput((1.0, 0.0, 0.0)), 2.0, [1])
        self.assertEqual(rows[0].K, 1)

    def test_p_equal_one_is_out_of_scope(self):
        with self.assertRaises(DomainError):
            limit_study(SequenceInput((1.0,)), 1.0, [10])


class IntegralLimitTests(unittest.TestCase):
    def test_gap_is_the_truncated_tail(self):
        rows = limit_study_integral(UNIT_INDICATOR, 2.0, [10, 100, 1000], "gt1")
        for row in rows:
            self.assertAlmostEqual(row.gap_to_classic, 1.0 / row.K, delta=1e-8)
        gaps = [row.gap_to_classic for row in rows]
        self.assertTrue(all(a > b for a, b in zip(gaps, gaps[1:])))

    def test_lt1_is_exact_once_k_covers_the_support(self):
        rows = limit_study_integral(UNIT_INDICATOR, 0.5, [1, 10, 100], "lt1")
        for row in rows:
            self.assertAlmostEqual(row.scaled_lhs, math.pi / 2.0, delta=1e-10)
            self.assertAlmostEqual(row.gap_to_classic, 0.0, delta=1e-10)

    def test_k_must_cover_the_support(self):
        psi = StepFunction((0.0, 2.5), (0.0, 1.0, 0.0))
        with self.assertRaises(PreconditionError):
            limit_study_integral(psi, 2.0, [2], "gt1")


class LimitRowTests(unittest.TestCase):
    def test_csv_row_uses_round_trip_floats(self):
        row = LimitRow(10, 0.1, 4.0, None, 1.0 / 3.0)
        self.assertEqual(
            row.to_row(),
            {
                "K": 10,
                "scaled_lhs": "0.1",
                "scaled_rhs": "4.0",
                "alpha_K": "",
                "gap_to_classic": repr(1.0 / 3.0),
            },
        )


if __name__ == "__main__":
    unittest.main()
