import sys
import os
import unittest

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from analysis.brackets import certify_bracket_forms
from analysis.center import center
from analysis.series import upper_central_series
from analysis.subloops import quotient
from loops.cayley_io import load_cayley, save_cayley
from loops.presets import preset
from suites.plan import SamplingPlan
from verify_pipeline import PaperVerifier

SLOW = os.getenv('LOOPFORGE_SLOW_TESTS') == '1'


@unittest.skipUnless(SLOW, 'set LOOPFORGE_SLOW_TESTS=1 for the full pipeline runs')
class TestVerifyPaper(unittest.TestCase):
    """End-to-end runs with the default certification budgets"""

    def test_class_three_loop_over_z4(self):
        result = PaperVerifier(plan=SamplingPlan.from_config(seed=0x5EED)).run('paper-z4')
        report = result.report
        self.assertTrue(result.passed, result.witness)
        expected = {
            'ring.ok': 'true',
            'x1.size': '64',
            'x2.size': '64',
            'x3.size': '4',
            'x1_x2.overlap': '0',
            'x2_x3.overlap': '0',
            'loop.order': '16384',
            'moufang.ok': 'true',
            'forms.certified': 'true',
            'inn.certified': 'true',
            'inn.order': '4096',
            'inn.abelian': 'true',
            'inn.exponent': '4',
            'center.contains_x3': 'true',
            'center.order': '4',
            'nucleus.contains_bc': 'true',
            'triple_comm.e123': '(0, 0, 2e7)',
            'class': '3',
            'suites.bruck_battery': 'pass',
            'suites.t_compose': 'pass',
            'theorem.odd_order': 'not-applicable'
        }
        for key, value in expected.items():
            with self.subTest(key=key):
                self.assertEqual(report.get(key), value)
        self.assertIsNone(report.get('stage.failed'))

    def test_modulus_three_variant(self):
        result = PaperVerifier().run('paper-z3')
        report = result.report
        self.assertTrue(result.passed, result.witness)
        self.assertEqual(report.get('loop.order'), '2187')
        self.assertEqual(report.get('inn.order'), '729')
        self.assertEqual(report.get('inn.abelian'), 'false')
        self.assertEqual(report.get('class'), '3')
        self.assertEqual(report.get('theorem.odd_order'), 'contrapositive-consistent')


@unittest.skipUnless(SLOW, 'set LOOPFORGE_SLOW_TESTS=1 for the order-16384 quotient runs')
class TestRingLoopQuotients(unittest.TestCase):
    """Coset tables of the class-three loop over Z4"""

    @classmethod
    def setUpClass(cls):
        cls.plan = SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500)
        cls.loop = preset('paper-z4')
        certify_bracket_forms(cls.loop, cls.plan, samples=2000)

    def test_quotient_by_center_saves_and_reloads(self):
        factor = quotient(self.loop, center(self.loop, self.plan), plan=self.plan)
        self.assertEqual(factor.order, 4096)
        text = save_cayley(factor)
        self.assertEqual(len(text.splitlines()), 4097)
        reloaded = load_cayley(text, 'reloaded')
        self.assertTrue(np.array_equal(reloaded.table, factor.table))

    def test_series_via_quotients_matches_parametric(self):
        parametric = upper_central_series(self.loop, plan=self.plan)
        stepped = upper_central_series(self.loop, via_quotients=True, plan=self.plan)
        self.assertEqual(stepped.mode, 'quotients')
        self.assertEqual(stepped.orders, parametric.orders)
        self.assertEqual(stepped.orders, [1, 4, 2048, 16384])
        self.assertEqual(stepped.nilpotency_class, 3)


if __name__ == '__main__':
    unittest.main()
