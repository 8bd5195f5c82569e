import csv
import json
import math
import tempfile
import unittest
from pathlib import Path

from backend import constants
from backend.exceptions import UnknownSuite
from cli import main
from cli.utils import Row, build_parser, closest, format_number, format_table

CIRCLE = {
    'scenario': {
        'initial': [[0, 0], [1, 0]],
        't0': 0.5, 't_end': 0.6, 'N': 16, 'M': 128, 'dt': 1e-3
    },
    'outputs': {'stride': 10, 'snapshot_stride': 50}
}

CUSP = {
    'scenario': {
        'initial': [[0, 0], [1, 0], [0.3, 0]],
        't_end': 0.1, 'dt': 1e-2, 'cusp_threshold': 0.5
    }
}


class TestUtils(unittest.TestCase):

    def test_format_number(self) -> None:
        self.assertEqual(format_number(None), 'n/a')
        self.assertEqual(format_number(math.nan), 'n/a')
        self.assertEqual(format_number(0.0), '0')
        self.assertEqual(format_number(1.234e-5), '1.23e-05')

    def test_rows(self) -> None:
        self.assertTrue(Row('a', 1e-9, 1e-8).passed)
        self.assertFalse(Row('b', 1e-7, 1e-8).passed)
        self.assertFalse(Row('c', math.nan, 1e-8).passed)
        self.assertTrue(Row('d', 5.0, None, True).passed)

        table = format_table('suite', [Row('a', 1e-9, 1e-8),
                                       Row('b', 1e-7, 1e-8),
                                       Row('d', 5.0, None, True)])
        lines = table.splitlines()
        self.assertEqual(lines[0], 'suite')
        self.assertTrue(lines[3].endswith('OK'))
        self.assertTrue(lines[4].endswith('FAIL'))
        self.assertTrue(lines[5].endswith('INFO'))

    def test_closest(self) -> None:
        choices = ['theorem1', 'virasoro', 'neretin']
        self.assertEqual(closest('neretin', choices), 'neretin')
        with self.assertRaises(UnknownSuite) as cm:
            closest('virasoor', choices)
        self.assertIn("did you mean 'virasoro'", str(cm.exception))

    def test_parser(self) -> None:
        args = build_parser().parse_args(['run', 'a.json', 'b.json',
                                          '--jobs', '2'])
        self.assertEqual(args.configs, [Path('a.json'), Path('b.json')])
        self.assertEqual(args.jobs, 2)
        self.assertIsNone(args.out)
        with self.assertRaises(SystemExit):
            build_parser().parse_args([])


class TestCheck(unittest.TestCase):

    def test_unknown_suite(self) -> None:
        self.assertEqual(main.main(['check', 'nosuch']), constants.EXIT_ERROR)

    def test_suites_pass(self) -> None:
        for name in ('proof-identity', 'virasoro', 'theorem1'):
            self.assertEqual(main.main(['check', name]), constants.EXIT_OK)


class TestRun(unittest.TestCase):

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def write(self, name: str, d: dict) -> str:
        path = self.root / name
        path.write_text(json.dumps(d), encoding='utf-8')
        return str(path)

    def test_circle(self) -> None:
        out = self.root / 'out'
        code = main.main(['run', self.write('circle.json', CIRCLE),
                          '--out', str(out)])
        self.assertEqual(code, constants.EXIT_OK)

        with open(out / 'timeseries.csv', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], constants.TIMESERIES_COLUMNS)
        self.assertEqual(len(rows), 12)
        self.assertAlmostEqual(float(rows[-1][0]), 0.6)

        for n in (0, 50, 100):
            self.assertTrue((out / f'boundary_{n:04d}.csv').exists())

        summary = json.loads((out / 'summary.json').read_text('utf-8'))
        self.assertEqual(summary['schema_version'], 1)
        self.assertEqual(summary['status'], 'Completed')
        self.assertLess(summary['max_residuals']['circle_law'], 1e-6)
        self.assertTrue(summary['checks']['circle-law']['passed'])

    def test_repeated_runs_identical(self) -> None:
        config = self.write('circle.json', CIRCLE)
        first, second = self.root / 'first', self.root / 'second'
        for out in (first, second):
            self.assertEqual(main.main(['run', config, '--out', str(out)]),
                             constants.EXIT_OK)

        names = sorted(path.name for path in first.iterdir())
        self.assertIn('summary.json', names)
        self.assertEqual(names, sorted(path.name for path in second.iterdir()))
        for name in names:
            self.assertEqual((first / name).read_bytes(),
                             (second / name).read_bytes(), name)

    def test_invalid_config(self) -> None:
        d = json.loads(json.dumps(CIRCLE))
        d['scenario']['dt'] = 0
        code = main.main(['run', self.write('bad.json', d),
                          '--out', str(self.root)])
        self.assertEqual(code, constants.EXIT_ERROR)
        self.assertEqual(main.main(['run', str(self.root / 'missing.json')]),
                         constants.EXIT_ERROR)

    def test_cusp_and_batch(self) -> None:
        out = self.root / 'out'
        configs = [self.write('circle.json', CIRCLE),
                   self.write('cusp.json', CUSP)]
        code = main.main(['run', *configs, '--out', str(out), '--jobs', '2'])
        self.assertEqual(code, constants.EXIT_CUSP)
        summary = json.loads((out / 'cusp' / 'summary.json').read_text('utf-8'))
        self.assertEqual(summary['status'], 'CuspStop')
        self.assertTrue((out / 'circle' / 'timeseries.csv').exists())

    def test_combine(self) -> None:
        self.assertEqual(main.combine([0, 2, 1]), constants.EXIT_ERROR)
        self.assertEqual(main.combine([0, 2]), constants.EXIT_CUSP)
        self.assertEqual(main.combine([0, 0]), constants.EXIT_OK)


if __name__ == '__main__':
    unittest.main()
