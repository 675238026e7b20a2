import sys
import os
import tempfile
import unittest
from io import StringIO
from pathlib import Path
from unittest.mock import patch

# Add the parent directory to system path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.ring import PRESET_DIR, parse_ring_spec
from cli import EXIT_ERROR, EXIT_FAILURE, EXIT_OK, main
from suites.plan import SamplingPlan
from utils.report_writer import Report, format_value
from verify_pipeline import FIXED_KEYS, PaperVerifier


def run_cli(*argv):
    with patch('sys.stdout', new_callable=StringIO) as out:
        code = main(list(argv))
    return code, out.getvalue()


class TestAnalyzeAndCheck(unittest.TestCase):
    def test_analyze_inner_group(self):
        code, out = run_cli('analyze', 's3', '--inn')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('# [loop]', out)
        self.assertIn('loop.order = 6', out)
        self.assertIn('inn.order = 6', out)
        self.assertIn('inn.abelian = false', out)

    def test_analyze_series(self):
        code, out = run_cli('analyze', 'c4', '--series', '--center')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('class = 1', out)
        self.assertIn('series.orders = 1, 4', out)
        self.assertIn('center.order = 4', out)

    def test_check_moufang_failure_exits_one(self):
        code, out = run_cli('check', 'nassoc5', '--suite', 'moufang')
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('moufang.status = fail', out)
        self.assertIn('moufang.moufang.witness[0]', out)

    def test_check_theorem(self):
        code, out = run_cli('check', 'cml81', '--theorem', 'odd-order', '--samples', '2000')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('theorem.odd_order = pass', out)
        self.assertIn('class = 2', out)

    def test_check_half_bundle(self):
        code, out = run_cli('check', 'heis27', '--suite', 'half-bundle', '--samples', '2000')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('half-bundle.status = pass', out)
        self.assertIn('half.abelian = true', out)

    def test_tsv_output(self):
        code, out = run_cli('analyze', 'c3', '--center', '--tsv')
        self.assertEqual(code, EXIT_OK)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], 'section\tkey\tvalue')
        self.assertIn('center\tcenter.order\t3', lines)

    def test_usage_errors_exit_two(self):
        with patch('sys.stderr', new_callable=StringIO):
            self.assertEqual(run_cli('check', 'c4')[0], EXIT_ERROR)
            self.assertEqual(run_cli('check', 'c4', '--suite', 'nope')[0], EXIT_ERROR)
        self.assertEqual(run_cli('analyze', 'no-such-loop', '--center')[0], EXIT_ERROR)

    def test_refused_construction_exits_two(self):
        # the half loop refuses loops with 2-torsion
        self.assertEqual(run_cli('check', 's3', '--suite', 'half-bundle')[0], EXIT_ERROR)


class TestConstruct(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_preset_with_table_export(self):
        table = self.dir / 'c4.tbl'
        descriptor = self.dir / 'c4.desc'
        code, out = run_cli('construct', 'preset', '--name', 'c4', '--out', str(descriptor),
                            '--export-table', str(table))
        self.assertEqual(code, EXIT_OK)
        self.assertIn('order = 4', out)
        self.assertEqual(descriptor.read_text(encoding='utf-8'), out)
        self.assertTrue(table.read_text(encoding='utf-8').startswith('loop 4\n'))

        code, out = run_cli('analyze', str(descriptor), '--center')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('center.order = 4', out)

    def test_chein_double(self):
        code, out = run_cli('construct', 'chein', '--group', 's3')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('kind = chein', out)
        self.assertIn('order = 12', out)

    def test_chein_refuses_non_groups(self):
        self.assertEqual(run_cli('construct', 'chein', '--group', 'nassoc5')[0], EXIT_ERROR)


class TestVerifyPaper(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.damaged = (PRESET_DIR / 'paper-z4.ring').read_text(encoding='utf-8').replace('prod 2 1 4 3\n', '')

    def tearDown(self):
        self.tmp.cleanup()

    def test_malformed_ring_file_exits_two(self):
        path = self.dir / 'broken.ring'
        path.write_text("ring\nmodulus 4\ndim 3\nprod 1 2 three 1\n", encoding='utf-8')
        code, out = run_cli('verify-paper', '--ring', str(path))
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, '')

    def test_failing_axioms_stop_at_ring_stage(self):
        result = PaperVerifier().run(parse_ring_spec(self.damaged, 'damaged'))
        self.assertFalse(result.passed)
        self.assertEqual(result.failed_stage, 'ring')
        self.assertTrue(result.witness)
        self.assertEqual(result.report.get('ring.ok'), 'false')
        self.assertEqual(result.report.get('class'), 'n/a')
        self.assertEqual(result.report.get('stage.failed'), 'ring')
        self.assertEqual(result.report.keys()[:len(FIXED_KEYS)], [key for _, key in FIXED_KEYS])

    def test_failing_axioms_exit_one(self):
        path = self.dir / 'damaged.ring'
        path.write_text(self.damaged, encoding='utf-8')
        code, out = run_cli('verify-paper', '--ring', str(path))
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('stage.failed = ring', out)
        self.assertIn('x1.size = n/a', out)

    def test_graded_overlap_is_recorded_not_fatal(self):
        # X1 is the whole module here, so it contains X2 = <e3>
        text = "ring\nmodulus 4\ndim 3\nx1 1 2 3\nprod 1 2 3 1\nprod 2 1 3 3\n"
        verifier = PaperVerifier(plan=SamplingPlan(seed=7, sample_count=2000, wide_sample_count=500))
        verifier.values = {key: None for _, key in FIXED_KEYS}
        parts = verifier.stage_ring(parse_ring_spec(text, 'overlapping'))
        loop = verifier.stage_loop(parse_ring_spec(text, 'overlapping'), parts)
        self.assertEqual(loop.order, 64 * 4)
        report = verifier.build_report(None)
        self.assertEqual(report.get('x1_x2.overlap'), '3')
        self.assertEqual(report.get('x2_x3.overlap'), '0')
        self.assertEqual(report.get('loop.order'), '256')
        self.assertEqual(report.get('moufang.ok'), 'true')


class TestReportWriter(unittest.TestCase):
    def test_format_value(self):
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(None), 'n/a')
        self.assertEqual(format_value([1, 3, 27]), '1, 3, 27')

    def test_sections_keep_insertion_order(self):
        report = Report()
        report.add('b', 'b.first', 1)
        report.add('a', 'a.first', 2)
        report.add('b', 'b.second', False)
        self.assertEqual(report.keys(), ['b.first', 'b.second', 'a.first'])
        text = report.render()
        self.assertTrue(text.startswith('# [b]\nb.first = 1\nb.second = false\n'))
        self.assertIn('# [a]\na.first = 2\n', text)
        self.assertEqual(report.to_frame().shape, (3, 3))


if __name__ == '__main__':
    unittest.main()
