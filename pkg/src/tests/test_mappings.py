import sys
import os
import unittest

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analysis.center import center
from loops.presets import preset
from mappings.inner_group import HGroup, certify_inner_form, inner_group_closure
from mappings.mapping import (Mapping, conjugation_parameters, identity_mapping, inner_generator,
                              permutation_order, s_mapping, translation)
from mappings.pseudo import center_automorphism_check, companion_check
from suites.plan import SamplingPlan
from utils.errors import UnknownNameError, UsageError

PLAN = SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500)


class TestMappings(unittest.TestCase):
    def setUp(self):
        self.s3 = preset('s3')

    def test_inner_generators_are_bijections(self):
        for x in range(6):
            t = inner_generator(self.s3, 'T', x)
            self.assertTrue(t.is_bijection())
            self.assertEqual(t(0), 0)
        self.assertTrue(inner_generator(self.s3, 'Lmap', 1, 3).is_bijection())
        self.assertTrue(inner_generator(self.s3, 'Rmap', 1, 3).is_bijection())

    def test_group_inner_maps(self):
        # in a group L(x,y) and R(x,y) are trivial and T(x) is conjugation
        self.assertTrue(inner_generator(self.s3, 'L', 1, 3).is_identity())
        self.assertTrue(inner_generator(self.s3, 'R', 2, 4).is_identity())
        self.assertFalse(inner_generator(self.s3, 'T', 1).is_identity())
        self.assertTrue(inner_generator(preset('c4'), 'T', 1).is_identity())

    def test_composition_is_right_action(self):
        left = translation(self.s3, 1)
        right = translation(self.s3, 3, side='right')
        composite = left.then(right)
        # p(φψ) = (pφ)ψ
        for p in range(6):
            self.assertEqual(int(composite(p)), self.s3.multiply(self.s3.multiply(1, p), 3))
        self.assertEqual(composite.then(composite.inverse()), identity_mapping(self.s3))

    def test_usage_errors(self):
        with self.assertRaises(UnknownNameError):
            inner_generator(self.s3, 'Q', 1)
        with self.assertRaises(UsageError):
            inner_generator(self.s3, 'L', 1)
        with self.assertRaises(UsageError):
            Mapping(self.s3, 'empty')

    def test_permutation_order(self):
        self.assertEqual(permutation_order(np.array([1, 2, 0, 4, 3])), 6)
        self.assertEqual(permutation_order(np.arange(4)), 1)


class TestInnerGroup(unittest.TestCase):
    def test_small_groups(self):
        cases = {'c4': (1, True, 1), 's3': (6, False, 6), 'd4': (4, True, 2), 'heis27': (9, True, 3)}
        for name, (order, abelian, exponent) in cases.items():
            with self.subTest(preset=name):
                inn = inner_group_closure(preset(name))
                self.assertEqual((inn.order, inn.abelian, inn.exponent), (order, abelian, exponent))
                self.assertTrue(inn.complete)
                self.assertEqual(inn.mode, 'materialized')

    def test_center_is_fixed_point_set(self):
        for name in ('s3', 'd4', 'heis27', 'cml81', 'chein-s3', 'nassoc5'):
            with self.subTest(preset=name):
                loop = preset(name)
                fixed = inner_group_closure(loop).fixed_points()
                self.assertTrue(np.array_equal(fixed, center(loop, PLAN).elements))

    def test_to_group_table(self):
        table = inner_group_closure(preset('s3')).to_group_table()
        self.assertEqual(table.order, 6)
        self.assertFalse(table.is_commutative())

    def test_budget_marks_incomplete(self):
        inn = inner_group_closure(preset('s3'), budget=2)
        self.assertFalse(inn.complete)

    def test_unknown_policy(self):
        with self.assertRaises(UsageError):
            inner_group_closure(preset('c4'), generator_policy='fastest')


class TestTripleInnerForm(unittest.TestCase):
    def setUp(self):
        self.loop = preset('paper-z3')
        self.report = certify_inner_form(self.loop, PLAN)

    def test_certification_passes(self):
        self.assertTrue(self.report.ok)

    def test_parametric_closure(self):
        inn = inner_group_closure(self.loop)
        self.assertEqual(inn.mode, 'parametric')
        self.assertEqual(inn.order, 27 * 27)
        self.assertFalse(inn.abelian)
        self.assertTrue(inn.complete)

    def test_conjugation_is_s_map(self):
        hg = HGroup(self.loop)
        x = self.loop.element(a='e1', b='e5')
        u, v = conjugation_parameters(self.loop, x)
        s = s_mapping(self.loop, int(u), int(v))
        t = inner_generator(self.loop, 'T', x)
        self.assertEqual(s, t)
        self.assertEqual(hg.order, 27 * 27)


class TestPseudoAutomorphisms(unittest.TestCase):
    def test_identity_has_neutral_companion(self):
        result = companion_check(preset('cml81'), identity_mapping(preset('cml81')), 0, PLAN)
        self.assertTrue(result)
        self.assertEqual(result.mode, 'exhaustive')
        self.assertEqual(result.checked, 81 * 81)

    def test_translation_is_not_a_pseudo_automorphism(self):
        s3 = preset('s3')
        result = companion_check(s3, translation(s3, 1), 0, PLAN)
        self.assertFalse(result)
        self.assertIsNotNone(result.witness)

    def test_center_automorphism(self):
        loop = preset('heis27')
        report = center_automorphism_check(loop, identity_mapping(loop), PLAN)
        self.assertTrue(report.ok)
        self.assertEqual(report.verdict, 'homomorphism into the center')

    def test_not_a_center_automorphism(self):
        s3 = preset('s3')
        report = center_automorphism_check(s3, inner_generator(s3, 'T', 1), PLAN)
        self.assertEqual(report.verdict, 'not a center automorphism')
        self.assertEqual(report.item('homomorphism').status.value, 'vacuous-gate')


if __name__ == '__main__':
    unittest.main()
