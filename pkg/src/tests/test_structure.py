import sys
import os
import unittest

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analysis.brackets import certify_bracket_forms
from analysis.center import center, nucleus
from analysis.series import nilpotency_class, upper_central_series
from analysis.subloops import (derived_subloop, is_normal, normal_closure, pull_back, quotient,
                               subloop_generated)
from loops.presets import preset
from mappings.inner_group import inner_group_closure
from suites.plan import SamplingPlan
from utils.errors import NotNormalError

PLAN = SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500)


class TestCenterAndNucleus(unittest.TestCase):
    def setUp(self):
        self.z4 = preset('paper-z4')
        certify_bracket_forms(self.z4, PLAN, samples=2000)

    def test_small_centers(self):
        self.assertEqual(center(preset('s3'), PLAN).order, 1)
        self.assertEqual(center(preset('c4'), PLAN).order, 4)
        self.assertEqual(center(preset('heis27'), PLAN).order, 3)
        self.assertEqual(center(preset('cml81'), PLAN).order, 3)

    def test_group_nucleus_is_whole(self):
        self.assertTrue(nucleus(preset('s3'), PLAN).is_whole())

    def test_triple_loop_center_is_third_part(self):
        z = center(self.z4, PLAN)
        self.assertEqual(z.order, 4)
        self.assertEqual(z.verified_how, 'parametric')
        for c in range(4):
            self.assertIn(self.z4.encode(0, 0, c), z)

    def test_triple_loop_nucleus(self):
        n = nucleus(self.z4, PLAN)
        self.assertEqual(n.order, 256)
        self.assertTrue(center(self.z4, PLAN).issubset(n))
        self.assertNotIn(self.z4.element(a='e1'), n)
        self.assertIn(self.z4.element(b='e4'), n)

    def test_modulus_three_center(self):
        z3 = preset('paper-z3')
        certify_bracket_forms(z3, PLAN, samples=2000)
        self.assertEqual(center(z3, PLAN).order, 3)


class TestCentralSeries(unittest.TestCase):
    def test_small_classes(self):
        cases = {'c3': 1, 'c4': 1, 'd4': 2, 'heis27': 2, 'cml81': 2}
        for name, expected in cases.items():
            with self.subTest(preset=name):
                self.assertEqual(nilpotency_class(preset(name)), expected)

    def test_not_nilpotent(self):
        for name in ('s3', 'chein-s3'):
            with self.subTest(preset=name):
                series = upper_central_series(preset(name))
                self.assertFalse(series.nilpotent)
                self.assertIsNone(series.nilpotency_class)
                self.assertEqual(series.verdict(), 'not nilpotent')
                self.assertEqual(series.stabilized.order, 1)

    def test_orders_climb_to_the_whole_loop(self):
        series = upper_central_series(preset('heis27'), via_quotients=True, plan=PLAN)
        self.assertEqual(series.orders, [1, 3, 27])
        self.assertEqual(series.mode, 'quotients')
        self.assertEqual(upper_central_series(preset('d4'), via_quotients=True, plan=PLAN).orders, [1, 2, 8])

    def test_triple_loops_have_class_three(self):
        for name in ('paper-z4', 'paper-z3'):
            with self.subTest(preset=name):
                loop = preset(name)
                certify_bracket_forms(loop, PLAN, samples=2000)
                series = upper_central_series(loop, plan=PLAN)
                self.assertEqual(series.mode, 'parametric')
                self.assertEqual(series.nilpotency_class, 3)
                self.assertEqual(series.orders[-1], loop.order)
                self.assertEqual(series.orders[1], loop.n3)

    def test_class_exceeds_inner_group_class_by_one(self):
        for name in ('c4', 'd4', 'heis27', 'cml81'):
            with self.subTest(preset=name):
                loop = preset(name)
                inn = inner_group_closure(loop).to_group_table()
                self.assertEqual(nilpotency_class(loop), nilpotency_class(inn) + 1)

    def test_trivial_loop(self):
        one = quotient(preset('c3'), subloop_generated(preset('c3'), [1]))
        self.assertEqual(one.order, 1)
        self.assertEqual(nilpotency_class(one), 0)


class TestSubloops(unittest.TestCase):
    def setUp(self):
        self.s3 = preset('s3')

    def test_generated_and_normality(self):
        transposition = subloop_generated(self.s3, [1])
        self.assertEqual(transposition.order, 2)
        self.assertFalse(is_normal(self.s3, transposition))
        self.assertTrue(normal_closure(self.s3, [1]).is_whole())
        alternating = subloop_generated(self.s3, [3])
        self.assertEqual(alternating.elements.tolist(), [0, 3, 4])
        self.assertTrue(is_normal(self.s3, alternating))

    def test_derived_subloops(self):
        self.assertEqual(derived_subloop(self.s3), subloop_generated(self.s3, [3]))
        self.assertEqual(derived_subloop(preset('c4')).order, 1)
        self.assertEqual(derived_subloop(preset('cml81')).order, 3)

    def test_class_two_iff_derived_inside_center(self):
        for name in ('c4', 'd4', 'heis27', 'cml81', 's3', 'chein-s3'):
            with self.subTest(preset=name):
                loop = preset(name)
                cl = nilpotency_class(loop)
                inside = derived_subloop(loop).issubset(center(loop, PLAN))
                self.assertEqual(cl is not None and cl <= 2, inside)


class TestQuotients(unittest.TestCase):
    def test_quotient_by_normal_subloop(self):
        s3 = preset('s3')
        factor = quotient(s3, subloop_generated(s3, [3]), plan=PLAN)
        self.assertEqual(factor.order, 2)
        self.assertEqual(factor.kind, 'quotient')
        self.assertTrue(factor.is_commutative())

    def test_non_normal_quotient_refused(self):
        s3 = preset('s3')
        with self.assertRaises(NotNormalError):
            quotient(s3, subloop_generated(s3, [1]), plan=PLAN)

    def test_heisenberg_modulo_center(self):
        loop = preset('heis27')
        factor = quotient(loop, center(loop, PLAN), plan=PLAN)
        self.assertEqual(factor.order, 9)
        self.assertTrue(factor.is_commutative())
        whole = pull_back(factor, subloop_generated(factor, factor.elements()))
        self.assertTrue(whole.is_whole())


if __name__ == '__main__':
    unittest.main()
