import sys
import os
import unittest

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from halfloop.divisibility import DivisibilityFailure, RootTable, divisibility
from halfloop.half_loop import build_half_loop
from halfloop.suite import half_suite
from loops.presets import preset
from suites.plan import SamplingPlan
from utils.errors import NotDivisibleError, UsageError

PLAN = SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500)


class TestDivisibility(unittest.TestCase):
    def test_square_roots_in_c3(self):
        roots = divisibility(preset('c3'), 2)
        self.assertIsInstance(roots, RootTable)
        self.assertEqual(int(roots.root(1)), 2)
        self.assertTrue(np.array_equal(roots.forward[roots.inverse], np.arange(3)))

    def test_exponent_three_is_not_3_divisible(self):
        result = divisibility(preset('heis27'), 3)
        self.assertIsInstance(result, DivisibilityFailure)
        self.assertFalse(result)
        self.assertEqual(result.witness, 1)
        self.assertEqual(result.collision, (0, 1))

    def test_even_order_group(self):
        self.assertFalse(divisibility(preset('s3'), 2))

    def test_bad_exponent(self):
        with self.assertRaises(UsageError):
            divisibility(preset('c3'), 1)


class TestHalfLoop(unittest.TestCase):
    def test_heisenberg_half_loop_is_abelian(self):
        loop = preset('heis27')
        half = build_half_loop(loop, PLAN)
        self.assertEqual(half.order, 27)
        self.assertEqual(half.kind, 'half')
        self.assertTrue(half.checks.ok)

        report = half_suite(loop, PLAN)
        self.assertTrue(report.ok)
        self.assertTrue(report.metadata['half.commutative'])
        self.assertTrue(report.metadata['half.abelian'])
        self.assertTrue(report.item('construction.left-bol').passed)
        self.assertEqual(report.item('construction.left-bol').mode, 'exhaustive')

    def test_commutative_moufang_half_loop(self):
        loop = preset('cml81')
        half = build_half_loop(loop, PLAN)
        # x^(1/2) y x^(1/2) = xy in a commutative Moufang loop
        self.assertTrue(np.array_equal(half.table, loop.table))
        report = half_suite(loop, PLAN)
        self.assertTrue(report.ok)
        self.assertTrue(report.metadata['half.commutative'])
        self.assertFalse(report.metadata['half.abelian'])
        self.assertTrue(report.item('abelian-criterion').passed)
        self.assertTrue(report.item('same-powers').passed)

    def test_refuses_loops_with_2_torsion(self):
        for name in ('s3', 'paper-z4'):
            with self.subTest(preset=name):
                with self.assertRaises(NotDivisibleError):
                    build_half_loop(preset(name), PLAN)


if __name__ == '__main__':
    unittest.main()
