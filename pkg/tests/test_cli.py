"""End-to-end tests of the command-line entry point."""

import contextlib
import io
import json
import os
import sys
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..')
sys.path.insert(0, ROOT)
sys.path.insert(0, os.path.join(ROOT, 'src'))

from experiments.engine import ExperimentEngine
from identities.reports import Verdict
from main import EXIT_CONSTANT_MISMATCH, EXIT_ERROR, EXIT_FAIL, EXIT_OK, main

TEST_CONFIG = os.path.join(ROOT, 'config', 'test_config.json')
SIX = ['--n', '6', '--p', '1', '--q', '1', '--l', '1']


def run_cli(*argv):
    """Run main() and return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv) + ['--config', TEST_CONFIG])
    return code, out.getvalue(), err.getvalue()


class TestCli(unittest.TestCase):
    """Test cases for exit codes and artifacts."""

    def test_constants_json(self):
        """Test that stdout holds only the JSON artifact."""
        code, out, err = run_cli('constants', '--name', 'c1', *SIX, '--lambda', '2')
        self.assertEqual(code, EXIT_OK, err)
        document = json.loads(out)
        self.assertAlmostEqual(document['body']['constants']['c1'], 4.0, places=12)
        self.assertEqual(document['header']['tool'], 'strichartz-radon')
        self.assertIn('strichartz-radon constants', err, "Banner goes to stderr")

    def test_transform_csv_to_file(self):
        """Test a CSV artifact written with --output."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'forward.csv')
            code, out, err = run_cli('transform', '--profile', 'power-law:2', *SIX,
                                     '--at', '1', '2', '--format', 'csv', '--output', path)
            self.assertEqual(code, EXIT_OK, err)
            self.assertIn(path, out, "Banner should name the artifact")
            with open(path) as handle:
                self.assertTrue(handle.readline().startswith('# config='))
            table = pd.read_csv(path, comment='#')
        np.testing.assert_allclose(table['value'], [4.0, 2.0], rtol=1e-6)

    def test_existence(self):
        """Test the existence op on a divergent profile."""
        code, out, _ = run_cli('transform', '--op', 'existence', '--profile', 'power-law:1',
                               *SIX)
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(json.loads(out)['body']['existence']['tail_ok'])

    def test_domain_error_exits_one(self):
        """Test that a transform failing everywhere exits with status 1."""
        code, _, err = run_cli('transform', '--profile', 'power-law:1', *SIX, '--at', '1')
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn('Error', err)

    def test_invalid_configuration_exits_one(self):
        """Test p+q+l >= n and an unknown profile."""
        code, _, _ = run_cli('constants', '--name', 'c3', '--n', '3', '--p', '1', '--q', '1',
                             '--l', '1')
        self.assertEqual(code, EXIT_ERROR)
        code, _, _ = run_cli('transform', '--profile', 'triangle', *SIX)
        self.assertEqual(code, EXIT_ERROR)

    def test_usage_error_exits_one(self):
        """Test that argparse errors use status 1."""
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(['constants', '--bogus'])
        self.assertEqual(ctx.exception.code, EXIT_ERROR)

    def test_no_command(self):
        """Test that a bare invocation prints help and succeeds."""
        with contextlib.redirect_stdout(io.StringIO()) as out:
            self.assertEqual(main([]), EXIT_OK)
        self.assertIn('transform', out.getvalue())

    @staticmethod
    def _stub_suite(verdict):
        def run(engine, cfg):
            return [{'check': 'stub', 'verdict': verdict.value, 'statistic': 0.0,
                     'tolerance': 1.0}]
        return run

    def test_verify_exit_codes(self):
        """Test status 2 for a failed check and 3 for a constant mismatch."""
        cases = ((Verdict.FAIL, EXIT_FAIL), (Verdict.CONSTANT_MISMATCH, EXIT_CONSTANT_MISMATCH),
                 (Verdict.PASS, EXIT_OK))
        for verdict, expected in cases:
            with mock.patch.object(ExperimentEngine, '_suite_fuglede', self._stub_suite(verdict)):
                code, out, err = run_cli('verify', '--suite', 'fuglede', *SIX)
            self.assertEqual(code, expected, err)
            self.assertEqual(json.loads(out)['body']['verdict'], verdict.value)

    def test_seeded_runs_repeat(self):
        """Test that two runs with one seed write the same body."""
        argv = ('verify', '--suite', 'mc-vs-radial', '--profile', 'gaussian', *SIX,
                '--at', '0.5', '1.0', '--samples', '4000', '--seed', '7')
        first_code, first, err = run_cli(*argv)
        second_code, second, _ = run_cli(*argv)
        self.assertEqual((first_code, second_code), (EXIT_OK, EXIT_OK), err)
        first_body = json.dumps(json.loads(first)['body'], sort_keys=True)
        second_body = json.dumps(json.loads(second)['body'], sort_keys=True)
        self.assertEqual(first_body, second_body)
        self.assertEqual(first, second, "The whole artifact carries no run-dependent fields")
        self.assertEqual(json.loads(first)['header']['seed'], 7)


if __name__ == '__main__':
    unittest.main()
