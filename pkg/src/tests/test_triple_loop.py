import sys
import os
import unittest

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.ring import PRESET_DIR, parse_ring_spec
from analysis.brackets import associator, certify_bracket_forms, commutator, forms_certified
from loops.presets import preset
from loops.triple import TripleLoop, build_bruck_loop
from suites.plan import SamplingPlan
from utils.errors import ConstructionRefused, RingValidationError, UsageError

PLAN = SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500)


class TestTripleLoop(unittest.TestCase):
    def setUp(self):
        self.loop = preset('paper-z4')
        self.e1 = self.loop.element(a='e1')
        self.e2 = self.loop.element(a='e2')
        self.e3 = self.loop.element(a='e3')

    def test_order_and_parts(self):
        self.assertIsInstance(self.loop, TripleLoop)
        self.assertEqual(self.loop.order, 4 ** 7)
        self.assertEqual((self.loop.n1, self.loop.n2, self.loop.n3), (64, 64, 4))

    def test_product_formula(self):
        # (a,0,0)(a',0,0) = (a+a', aa', 0)
        self.assertEqual(self.loop.describe(self.loop.multiply(self.e1, self.e2)), '(e1+e2, e4, 0)')
        self.assertEqual(self.loop.describe(self.loop.multiply(self.e2, self.e1)), '(e1+e2, 3e4, 0)')
        # (0,b,0)(a',0,0) = (a', b, ba')
        b = self.loop.element(b='e4')
        self.assertEqual(self.loop.describe(self.loop.multiply(b, self.e3)), '(e3, e4, e7)')

    def test_divisions_and_inverses(self):
        rng = np.random.default_rng(1)
        x, y = rng.integers(0, self.loop.order, size=(2, 5000))
        self.assertTrue(np.array_equal(self.loop.mul(x, self.loop.ldiv(x, y)), y))
        self.assertTrue(np.array_equal(self.loop.mul(self.loop.rdiv(y, x), x), y))
        inverse = self.loop.inv(x)
        self.assertTrue((self.loop.mul(x, inverse) == 0).all())
        self.assertTrue((self.loop.mul(inverse, x) == 0).all())

    def test_iterated_commutator(self):
        value = commutator(self.loop, commutator(self.loop, self.e1, self.e2), self.e3)
        self.assertEqual(self.loop.describe(int(value)), '(0, 0, 2e7)')
        self.assertEqual(self.loop.describe(int(associator(self.loop, self.e1, self.e2, self.e3))),
                         '(0, 0, e7)')

    def test_element_parsing(self):
        self.assertEqual(self.loop.element(), 0)
        self.assertEqual(self.loop.element(a=[1, 0, 0, 0, 0, 0, 0]), self.e1)
        with self.assertRaises(RingValidationError):
            self.loop.element(a='e4')

    def test_bracket_forms_certify(self):
        report = certify_bracket_forms(self.loop, PLAN, samples=2000)
        self.assertTrue(report.ok)
        self.assertEqual([item.name for item in report.items],
                         ['commutator', 'iterated-commutator', 'associator', 'inner-action', 'conjugation'])
        self.assertEqual(report.item('associator').checked, 64 ** 3 + 2000)
        self.assertTrue(forms_certified(self.loop))

    def test_forms_need_a_triple_loop(self):
        with self.assertRaises(UsageError):
            certify_bracket_forms(preset('s3'), PLAN)
        self.assertFalse(forms_certified(preset('s3')))


class TestBruckConstruction(unittest.TestCase):
    def test_refuses_rings_failing_axioms(self):
        text = (PRESET_DIR / 'paper-z4.ring').read_text(encoding='utf-8').replace('prod 2 1 4 3\n', '')
        with self.assertRaises(ConstructionRefused):
            build_bruck_loop(parse_ring_spec(text, 'damaged'))

    def test_modulus_three_loop(self):
        loop = preset('paper-z3')
        self.assertEqual(loop.order, 3 ** 7)
        self.assertTrue(certify_bracket_forms(loop, PLAN, samples=2000).ok)


if __name__ == '__main__':
    unittest.main()
