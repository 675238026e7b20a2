import sys
import os
import unittest
from unittest.mock import patch

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import Config
from suites.plan import SamplingPlan
from utils.parallel import chunk_bounds, map_chunks


class TestConfig(unittest.TestCase):
    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        """Test defaults when no LOOPFORGE_* variable is set"""
        config = Config()
        self.assertEqual(config.seed, 0x5EED)
        self.assertEqual(config.sample_count, 10**6)
        self.assertEqual(config.wide_sample_count, 10**5)
        self.assertEqual(config.cayley_export_cap, 4096)
        self.assertEqual(config.log_level, 'INFO')
        self.assertIsNone(config.log_file)
        self.assertGreaterEqual(config.threads, 1)
        self.assertLessEqual(config.threads, 4)

    @patch.dict(os.environ, {'LOOPFORGE_THREADS': '3', 'LOOPFORGE_SEED': '0x10',
                             'LOOPFORGE_SAMPLES': '500', 'LOOPFORGE_LOG_LEVEL': 'debug'})
    def test_environment_overrides(self):
        config = Config()
        self.assertEqual(config.threads, 3)
        self.assertEqual(config.seed, 16)
        self.assertEqual(config.sample_count, 500)
        self.assertEqual(config.log_level, 'DEBUG')

    def test_invalid_values(self):
        """Test that _validate_config rejects bad settings"""
        for env in ({'LOOPFORGE_THREADS': '0'}, {'LOOPFORGE_SAMPLES': 'many'},
                    {'LOOPFORGE_SEED': '-1'}, {'LOOPFORGE_LOG_LEVEL': 'LOUD'}):
            with self.subTest(env=env), patch.dict(os.environ, env):
                with self.assertRaises(ValueError):
                    Config()

    def test_exhaustive_caps_are_copies(self):
        config = Config()
        caps = config.exhaustive_caps
        caps[2] = 0
        self.assertEqual(Config.EXHAUSTIVE_CAPS[2], 1024)


class TestSamplingPlan(unittest.TestCase):
    def setUp(self):
        self.plan = SamplingPlan(seed=11, sample_count=300, wide_sample_count=50)

    def test_from_config_overrides(self):
        plan = SamplingPlan.from_config(Config(), seed=3, sample_count=None, threads=2)
        self.assertEqual(plan.seed, 3)
        self.assertEqual(plan.threads, 2)
        self.assertEqual(plan.sample_count, Config().sample_count)

    def test_exhaustive_tuples(self):
        tuples = self.plan.tuples(3, 2)
        self.assertEqual(tuples.shape, (9, 2))
        self.assertEqual(tuples[0].tolist(), [0, 0])
        self.assertEqual(tuples[5].tolist(), [1, 2])
        self.assertEqual(self.plan.mode(3, 2), 'exhaustive')

    def test_sampled_tuples_are_seeded(self):
        first = self.plan.tuples(5000, 2, stream=4)
        again = self.plan.tuples(5000, 2, stream=4)
        other = self.plan.replace(seed=12).tuples(5000, 2, stream=4)
        self.assertEqual(first.shape, (300, 2))
        self.assertTrue(np.array_equal(first, again))
        self.assertFalse(np.array_equal(first, other))
        self.assertEqual(self.plan.mode(5000, 2), 'sampled')
        self.assertEqual(self.plan.tuples(100, 4).shape, (50, 4))

    def test_points_are_distinct_and_sorted(self):
        points = self.plan.points(1000, 64)
        self.assertEqual(len(np.unique(points)), 64)
        self.assertTrue((np.diff(points) > 0).all())
        self.assertEqual(len(self.plan.points(10, 64)), 10)


class TestParallel(unittest.TestCase):
    def test_chunk_bounds(self):
        self.assertEqual(chunk_bounds(10, 4), [(0, 4), (4, 8), (8, 10)])
        self.assertEqual(chunk_bounds(0, 4), [])

    def test_merge_order_does_not_depend_on_threads(self):
        serial = map_chunks(lambda lo, hi: list(range(lo, hi)), 10, threads=1, chunk_size=3)
        threaded = map_chunks(lambda lo, hi: list(range(lo, hi)), 10, threads=3, chunk_size=3)
        self.assertEqual(serial, [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9]])
        self.assertEqual(serial, threaded)


if __name__ == '__main__':
    unittest.main()
