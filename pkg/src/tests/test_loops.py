import sys
import os
import tempfile
import unittest
from pathlib import Path

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from loops.base import CayleyLoop
from loops.cayley_io import load_cayley, save_cayley
from loops.groups import GroupTable, chein_double, verify_group
from loops.latin import verify_latin
from loops.presets import PRESET_NAMES, preset
from loops.sources import descriptor_text, parse_descriptor, resolve_loop
from suites.plan import SamplingPlan
from utils.errors import (ConstructionRefused, ElementError, InverseError, LoopFormatError, SizeGateError,
                          UnknownNameError)

SMALL_ORDERS = {'c3': 3, 'c4': 4, 's3': 6, 'd4': 8, 'heis27': 27, 'cml81': 81, 'nassoc5': 5, 'chein-s3': 12}


class TestPresets(unittest.TestCase):
    def test_orders(self):
        for name, order in SMALL_ORDERS.items():
            with self.subTest(preset=name):
                self.assertEqual(preset(name).order, order)
        self.assertIn('paper-z4', PRESET_NAMES)

    def test_unknown_preset(self):
        with self.assertRaises(UnknownNameError):
            preset('c5')

    def test_groups_are_verified(self):
        for name in ('c3', 'c4', 's3', 'd4', 'heis27'):
            with self.subTest(preset=name):
                self.assertIsInstance(preset(name), GroupTable)
        for name in ('nassoc5', 'chein-s3', 'cml81'):
            with self.subTest(preset=name):
                with self.assertRaises(ConstructionRefused):
                    verify_group(preset(name))

    def test_light_test_with_generators(self):
        group = verify_group(preset('s3'), generators=[1, 3])
        self.assertEqual(group.verified_how, 'light')

    def test_cml81_is_commutative(self):
        self.assertTrue(preset('cml81').is_commutative())
        self.assertFalse(preset('s3').is_commutative())


class TestScalarOperations(unittest.TestCase):
    def setUp(self):
        self.loop = preset('nassoc5')

    def test_divisions(self):
        for x in range(5):
            for y in range(5):
                self.assertEqual(self.loop.multiply(x, self.loop.left_divide(x, y)), y)
                self.assertEqual(self.loop.multiply(self.loop.right_divide(y, x), x), y)

    def test_two_sided_inverses(self):
        # 2·3 = 0 but 3·2 = 1
        with self.assertRaises(InverseError):
            self.loop.inverse(2)
        self.assertEqual(self.loop.inverse(1), 1)

    def test_element_range(self):
        with self.assertRaises(ElementError):
            self.loop.multiply(5, 0)

    def test_powers_in_a_group(self):
        c4 = preset('c4')
        self.assertEqual(c4.power(1, 3), 3)
        self.assertEqual(c4.power(1, -1), 3)
        self.assertEqual(c4.power(2, 0), 0)


class TestCayleyFormat(unittest.TestCase):
    def test_round_trip(self):
        text = save_cayley(preset('c4'))
        lines = text.strip().splitlines()
        self.assertEqual(lines[0], 'loop 4')
        self.assertEqual(lines[1], '0 1 2 3')
        self.assertEqual(len(lines), 5)
        loaded = load_cayley(text, name='c4-copy')
        self.assertTrue(np.array_equal(loaded.table, preset('c4').table))

    def test_rejects_non_latin_rows(self):
        with self.assertRaises(LoopFormatError) as ctx:
            load_cayley("loop 3\n0 1 2\n1 1 0\n2 0 1\n")
        self.assertEqual(ctx.exception.row, 1)

    def test_rejects_non_latin_columns(self):
        with self.assertRaises(LoopFormatError) as ctx:
            load_cayley("loop 3\n0 1 2\n1 2 0\n2 1 0\n")
        self.assertIsNotNone(ctx.exception.column)

    def test_rejects_non_neutral_zero(self):
        with self.assertRaises(LoopFormatError):
            load_cayley("loop 2\n1 0\n0 1\n")

    def test_rejects_short_tables(self):
        with self.assertRaises(LoopFormatError):
            load_cayley("# two rows only\nloop 3\n0 1 2\n1 2 0\n")

    def test_export_cap(self):
        with self.assertRaises(SizeGateError):
            save_cayley(preset('cml81'), cap=64)


class TestConstructions(unittest.TestCase):
    def test_chein_double(self):
        loop = chein_double(preset('s3'))
        self.assertEqual(loop.order, 12)
        self.assertTrue(np.array_equal(loop.table, preset('chein-s3').table))
        abelian = chein_double(preset('c3'))
        self.assertIsInstance(verify_group(abelian), GroupTable)

    def test_verify_latin(self):
        plan = SamplingPlan(sample_count=2000)
        for name in ('c4', 'nassoc5', 'chein-s3'):
            with self.subTest(preset=name):
                report = verify_latin(preset(name), plan)
                self.assertTrue(report.ok)
                self.assertEqual(report.item('rows').mode, 'exhaustive')

    def test_verify_latin_on_triple_loop(self):
        report = verify_latin(preset('paper-z4'), SamplingPlan(sample_count=2000))
        self.assertTrue(report.ok)
        self.assertEqual(report.item('collisions').checked, 2000)
        self.assertEqual(report.item('a-translations').checked, 64)

    def test_unvalidated_table_fails_latin_check(self):
        bad = CayleyLoop([[0, 1, 2], [1, 1, 0], [2, 0, 1]], name='bad', validate=False)
        report = verify_latin(bad, SamplingPlan())
        self.assertFalse(report.ok)
        self.assertEqual(report.item('rows').witnesses, [(1,)])


class TestSources(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_preset_and_cayley_file(self):
        self.assertIs(resolve_loop('s3'), preset('s3'))
        path = self.dir / 's3.tbl'
        path.write_text(save_cayley(preset('s3')), encoding='utf-8')
        loop = resolve_loop(path)
        self.assertEqual(loop.order, 6)
        self.assertEqual(loop.name, 's3')

    def test_descriptor_files(self):
        (self.dir / 's3.tbl').write_text(save_cayley(preset('s3')), encoding='utf-8')
        descriptor = self.dir / 'double.desc'
        descriptor.write_text(descriptor_text('chein', 's3.tbl', preset('chein-s3')), encoding='utf-8')
        self.assertEqual(resolve_loop(descriptor).order, 12)

    def test_descriptor_order_mismatch(self):
        descriptor = self.dir / 'c4.desc'
        descriptor.write_text("descriptor\nkind = preset\nsource = c4\norder = 5\n", encoding='utf-8')
        with self.assertRaises(LoopFormatError):
            resolve_loop(descriptor)

    def test_parse_descriptor(self):
        fields = parse_descriptor(descriptor_text('preset', 'c4', preset('c4')))
        self.assertEqual(fields, {'kind': 'preset', 'source': 'c4', 'order': '4'})
        with self.assertRaises(LoopFormatError):
            parse_descriptor("descriptor\nkind = preset\n")

    def test_unknown_source(self):
        with self.assertRaises(UnknownNameError):
            resolve_loop(self.dir / 'missing.tbl')
        junk = self.dir / 'junk.txt'
        junk.write_text("hello\n", encoding='utf-8')
        with self.assertRaises(LoopFormatError):
            resolve_loop(junk)


if __name__ == '__main__':
    unittest.main()
