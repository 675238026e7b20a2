import sys
import os
import unittest

import numpy as np

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.ring import (PRESET_DIR, check_ring_axioms, graded_parts, load_ring_preset, parse_ring_spec,
                          resolve_ring, ring_mul, ring_mul_many)
from utils.errors import RingValidationError, SpecParseError, UnknownNameError


def preset_text(name: str) -> str:
    return (PRESET_DIR / f"{name}.ring").read_text(encoding='utf-8')


class TestRingParsing(unittest.TestCase):
    def test_paper_preset(self):
        spec = load_ring_preset('paper-z4')
        self.assertEqual(spec.modulus, 4)
        self.assertEqual(spec.dim, 7)
        self.assertEqual(spec.x1_basis, (1, 2, 3))
        self.assertEqual(spec.product_terms(2, 1), [(4, 3)])

    def test_repeated_products_accumulate(self):
        spec = parse_ring_spec("ring\nmodulus 4\ndim 3\nx1 1\nprod 1 2 3 1\nprod 1 2 3 2\n")
        self.assertEqual(spec.product_terms(1, 2), [(3, 3)])
        spec = parse_ring_spec("ring\nmodulus 4\ndim 3\nprod 1 2 3 2\nprod 1 2 3 2  # cancels\n")
        self.assertEqual(spec.product_terms(1, 2), [])

    def test_parse_errors_carry_line_numbers(self):
        with self.assertRaises(SpecParseError) as ctx:
            parse_ring_spec("ring\nmodulus 4\ndim 3\nprod 1 2 three 1\n")
        self.assertEqual(ctx.exception.line, 4)
        with self.assertRaises(SpecParseError) as ctx:
            parse_ring_spec("# comment\nmodulus 4\n")
        self.assertEqual(ctx.exception.line, 2)
        with self.assertRaises(SpecParseError):
            parse_ring_spec("ring\nmodulus 4\ndim 3\nbasis 1 2\n")

    def test_index_out_of_range(self):
        with self.assertRaises(RingValidationError):
            parse_ring_spec("ring\nmodulus 4\ndim 3\nprod 1 2 9 1\n")
        with self.assertRaises(RingValidationError):
            parse_ring_spec("ring\nmodulus 1\ndim 3\n")

    def test_unknown_preset(self):
        with self.assertRaises(UnknownNameError):
            resolve_ring('no-such-ring')


class TestRingArithmetic(unittest.TestCase):
    def setUp(self):
        self.spec = load_ring_preset('paper-z4')

    def test_basis_products(self):
        e1, e2, e3 = (self.spec.basis(i) for i in (1, 2, 3))
        self.assertEqual(str(ring_mul(self.spec, e1, e2)), 'e4')
        self.assertEqual(str(ring_mul(self.spec, e2, e1)), '3e4')
        self.assertEqual(str(ring_mul(self.spec, ring_mul(self.spec, e1, e2), e3)), 'e7')
        self.assertTrue(ring_mul(self.spec, e1, e1).is_zero())

    def test_dimension_mismatch(self):
        with self.assertRaises(RingValidationError):
            ring_mul_many(self.spec, np.zeros(3, dtype=np.int64), np.zeros(7, dtype=np.int64))

    def test_axioms_hold(self):
        report = check_ring_axioms(self.spec)
        self.assertTrue(report.ok)
        self.assertEqual(report.item('associativity').checked, 343)
        self.assertEqual(report.item('alternating-x1').checked, 64 ** 2)

    def test_deleting_a_product_fails_with_witness(self):
        text = preset_text('paper-z4').replace('prod 2 1 4 3\n', '')
        report = check_ring_axioms(parse_ring_spec(text, 'damaged'))
        self.assertFalse(report.ok)
        item = report.item('alternating-x1')
        self.assertTrue(item.failed)
        self.assertTrue(item.witnesses)

    def test_every_single_product_is_needed(self):
        self.assertEqual(len(self.spec.products), 12)
        for i, j in self.spec.products:
            with self.subTest(product=f"e{i}e{j}"):
                damaged = self.spec.without_product(i, j)
                self.assertEqual(damaged.product_terms(i, j), [])
                report = check_ring_axioms(damaged)
                self.assertFalse(report.ok)
                name, witness = report.first_witness()
                self.assertTrue(report.item(name).failed)
                self.assertTrue(witness)

    def test_graded_parts(self):
        parts = graded_parts(self.spec)
        self.assertEqual(parts.sizes, (64, 64, 4))
        self.assertEqual(parts.overlaps, {'x1_x2': 0, 'x2_x3': 0})
        self.assertEqual(parts.x1.describe(0), '0')
        index = parts.x2.index_of(np.array([[0, 0, 0, 1, 0, 0, 0]]))
        self.assertEqual(parts.x2.describe(int(index[0])), 'e4')
        with self.assertRaises(RingValidationError):
            parts.x3.index_of(np.array([[1, 0, 0, 0, 0, 0, 0]]))

    def test_modulus_three_variant(self):
        spec = load_ring_preset('paper-z3')
        self.assertTrue(check_ring_axioms(spec).ok)
        self.assertEqual(graded_parts(spec).sizes, (27, 27, 3))


if __name__ == '__main__':
    unittest.main()
