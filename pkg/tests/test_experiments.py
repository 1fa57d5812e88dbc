"""Unit tests for configuration resolution, artifacts and the experiment engine."""

import contextlib
import json
import math
import os
import sys
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from experiments.config import ExperimentConfig, load_config_file, parse_profile
from experiments.engine import SUITES, ExperimentEngine, worst_verdict
from experiments.output import body_of, build_header, jsonable, render_csv
from fractional.profiles import NEG_INF, ProfileKind, RadialProfile, read_grid_csv
from identities.reports import Verdict
from numerics.errors import ConfigError, DivergenceError, DomainError
from numerics.parallel import THREADS_ENV
from storage.run_store import RunStore

SIX_FLAGS = {'n': 6, 'p': 1, 'q': 1, 'l': 1}


def _config(command, **flags):
    """Resolve a configuration without touching any config file or the environment."""
    with mock.patch.dict(os.environ, {}, clear=False):
        os.environ.pop(THREADS_ENV, None)
        return ExperimentConfig.resolve(command, flags)


class TestConfigResolution(unittest.TestCase):
    """Test cases for the defaults < file < environment < flags layering."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'config.json')
        with open(self.path, 'w') as handle:
            json.dump({'monte_carlo': {'samples': 5000, 'seed': 3, 'workers': 2},
                       'output': {'directory': 'results'}}, handle)

    def tearDown(self):
        self.tmp.cleanup()

    def test_defaults(self):
        """Test values when nothing is configured."""
        config = _config('constants')
        self.assertEqual(config.samples, 100_000)
        self.assertIsNone(config.seed)
        self.assertEqual(config.format, 'json')
        self.assertEqual(config.tolerances['single'], 1e-6)
        self.assertEqual(len(config.probes), 8)

    def test_layering(self):
        """Test that flags beat the environment, which beats the file."""
        with mock.patch.dict(os.environ, {THREADS_ENV: '3'}):
            config = ExperimentConfig.resolve('verify', {'samples': 100}, self.path,
                                              explicit_config=True)
            self.assertEqual(config.samples, 100, "Flag should win over the file")
            self.assertEqual(config.seed, 3, "File value should survive an absent flag")
            self.assertEqual(config.workers, 3, "Environment should win over the file")
            config = ExperimentConfig.resolve('verify', {'threads': 1}, self.path,
                                              explicit_config=True)
            self.assertEqual(config.workers, 1, "Flag should win over the environment")

    def test_output_directory(self):
        """Test that bare output names land in output.directory."""
        config = ExperimentConfig.resolve('constants', {'output': 'c1.json'}, self.path, True)
        self.assertEqual(config.output, os.path.join('results', 'c1.json'))
        config = ExperimentConfig.resolve('constants', {'output': 'out/c1.json'}, self.path,
                                          True)
        self.assertEqual(config.output, 'out/c1.json')

    def test_missing_and_malformed_files(self):
        """Test config file errors."""
        missing = os.path.join(self.tmp.name, 'absent.json')
        with self.assertRaises(ConfigError):
            load_config_file(missing, explicit=True)
        self.assertEqual(load_config_file(missing, explicit=False), {})
        broken = os.path.join(self.tmp.name, 'broken.json')
        with open(broken, 'w') as handle:
            handle.write('[1, 2]')
        with self.assertRaises(ConfigError):
            load_config_file(broken)

    def test_invalid_values(self):
        """Test validation of formats, grids and sample counts."""
        with self.assertRaises(ConfigError):
            _config('constants', format='xml')
        with self.assertRaises(ConfigError):
            _config('verify', samples=1)
        with self.assertRaises(ConfigError):
            _config('transform', at=[-1.0])
        with self.assertRaises(ConfigError):
            _config('constants').grassmann()

    def test_as_dict(self):
        """Test that the resolved config serializes completely."""
        config = _config('constants', name='c1', lam=2.0, **SIX_FLAGS)
        data = config.as_dict()
        self.assertEqual(data['name'], 'c1')
        self.assertIn('quadrature', data['settings'])
        json.dumps(jsonable(data))


class TestParseProfile(unittest.TestCase):
    """Test cases for profile specifications."""

    def test_kinds(self):
        """Test each closed-form kind."""
        self.assertAlmostEqual(parse_profile('gaussian')(1.0), math.exp(-1.0))
        self.assertAlmostEqual(parse_profile('gaussian:2')(2.0), math.exp(-1.0))
        self.assertEqual(parse_profile('power-law:2').head_exponent, -2.0)
        self.assertEqual(parse_profile('generalized-cauchy:3').tail_exponent, -3.0)
        self.assertEqual(parse_profile('zero').kind, ProfileKind.ZERO)

    def test_errors(self):
        """Test unknown kinds, missing and malformed parameters."""
        for text in ('triangle', 'power-law', 'power-law:two', 'grid:', 'grid:/no/such.csv'):
            with self.assertRaises(ConfigError, msg=text):
                parse_profile(text)


class TestOutput(unittest.TestCase):
    """Test cases for JSON and CSV artifacts."""

    def test_jsonable(self):
        """Test conversion of numpy values, enums and non-finite floats."""
        value = jsonable({'a': np.float64(1.5), 'b': np.arange(2), 'c': Verdict.PASS,
                          'd': float('nan'), 'e': -math.inf, 'f': np.bool_(True)})
        self.assertEqual(value, {'a': 1.5, 'b': [0, 1], 'c': 'pass', 'd': 'nan', 'e': '-inf',
                                 'f': True})

    def test_csv_header(self):
        """Test that CSV artifacts start with sorted '# key=value' lines."""
        header = build_header({'command': 'transform', 'settings': {'tolerances': {}}}, seed=7)
        text = render_csv(header, pd.DataFrame({'radius': [1.0], 'value': [0.5]}))
        lines = text.splitlines()
        self.assertTrue(lines[0].startswith('# config='))
        self.assertIn('# seed=7', lines)
        self.assertEqual(lines[-2], 'radius,value')
        self.assertEqual(lines[-1], '1,0.5')


class TestEngine(unittest.TestCase):
    """Test cases for ExperimentEngine commands."""

    def test_worst_verdict(self):
        """Test verdict severity ordering."""
        self.assertEqual(worst_verdict(['pass', None, 'constant-mismatch']), 'constant-mismatch')
        self.assertEqual(worst_verdict(['pass', 'fail', 'constant-mismatch']), 'fail')
        self.assertIsNone(worst_verdict([None]))

    def test_constants(self):
        """Test the constants command with and without a name."""
        result = ExperimentEngine(_config('constants', name='c1', lam=2.0, **SIX_FLAGS)).run()
        self.assertAlmostEqual(result['body']['constants']['c1'], 4.0, places=12)
        self.assertIsNone(result['verdict'])
        listing = ExperimentEngine(_config('constants', **SIX_FLAGS)).run()
        self.assertIn('c3', listing['body']['constants'])
        self.assertNotIn('c1', listing['body']['constants'], "c1 needs --lambda")

    def test_transform(self):
        """Test the forward transform of r^-2 and its JSON rendering."""
        config = _config('transform', profile='power-law:2', at=[1.0, 2.0], seed=5,
                         **SIX_FLAGS)
        engine = ExperimentEngine(config)
        result = engine.run()
        np.testing.assert_allclose(result['body']['values'], [4.0, 2.0], rtol=1e-6)
        self.assertEqual(result['seed'], 5)
        body = body_of(engine.render(result))
        self.assertEqual(body['operation'], 'strichartz-forward')

    def test_transform_divergent(self):
        """Test that a transform failing at every radius raises."""
        config = _config('transform', profile='power-law:1', at=[1.0], **SIX_FLAGS)
        with self.assertRaises((DivergenceError, DomainError)):
            ExperimentEngine(config).run()

    def test_existence(self):
        """Test the existence op."""
        config = _config('transform', operation='existence', profile='power-law:1',
                         **SIX_FLAGS)
        body = ExperimentEngine(config).run()['body']
        self.assertFalse(body['existence']['ok'])
        self.assertEqual(body['lp_bound'], 4.0)

    def test_export_grid(self):
        """Test that export-grid writes a readable grid file."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'grids', 'gaussian.csv')
            result = ExperimentEngine(_config('export-grid', output=path)).run()
            self.assertEqual(result['artifact_written'], path)
            grid = read_grid_csv(path)
            self.assertEqual(grid.radii.size, 512)
            self.assertAlmostEqual(grid(1.0) / math.exp(-1.0), 1.0, delta=1e-3)

    def test_recording_and_history(self):
        """Test that runs are recorded and listed newest first."""
        store = RunStore(':memory:').connect()
        try:
            config = _config('constants', name='c3', **SIX_FLAGS)
            ExperimentEngine(config, store).run()
            with self.assertRaises(DomainError):
                ExperimentEngine(_config('constants', name='nope', **SIX_FLAGS), store).run()
            history = ExperimentEngine(_config('history', limit=5), store).run()
            runs = history['body']['runs']
            self.assertEqual([run['status'] for run in runs], ['error', 'success'])
            self.assertEqual(store.run_count(), 2, "history itself is not recorded")
        finally:
            store.disconnect()

    def test_history_needs_store(self):
        """Test that history without a run log is a configuration error."""
        with self.assertRaises(ConfigError):
            ExperimentEngine(_config('history')).run()

    @staticmethod
    def _suite_returning(verdict):
        def run(engine, cfg):
            return [{'check': f'stub-{verdict}', 'verdict': verdict, 'statistic': 0.0,
                     'tolerance': 1.0}]
        return run

    def _patched_suites(self, overrides):
        patches = {f"_suite_{name.replace('-', '_')}": self._suite_returning('pass')
                   for name in SUITES}
        patches.update(overrides)
        stack = contextlib.ExitStack()
        for attribute, replacement in patches.items():
            stack.enter_context(mock.patch.object(ExperimentEngine, attribute, replacement))
        return stack

    def test_verify_all_keeps_one_entry_per_check(self):
        """Test that suite 'all' reports every suite once and takes the worst verdict."""
        def diverging(engine, cfg):
            raise DivergenceError("tail too slow")

        overrides = {'_suite_fuglede': self._suite_returning('fail'),
                     '_suite_semigroup': diverging}
        with self._patched_suites(overrides):
            result = ExperimentEngine(_config('verify', suite='all', **SIX_FLAGS)).run()
        checks = result['body']['checks']
        self.assertEqual([entry['suite'] for entry in checks], list(SUITES),
                         "Each suite should contribute exactly its own entries")
        self.assertEqual(result['verdict'], 'fail')
        self.assertEqual(result['success'], len(SUITES) - 2)
        self.assertTrue(any(e.startswith('semigroup:') for e in result['errors']))

    def test_verify_single_suite(self):
        """Test that one suite is run alone and its errors propagate."""
        with self._patched_suites({'_suite_fuglede': self._suite_returning('constant-mismatch')}):
            result = ExperimentEngine(_config('verify', suite='fuglede', **SIX_FLAGS)).run()
        self.assertEqual(len(result['body']['checks']), 1)
        self.assertEqual(result['verdict'], 'constant-mismatch')

        def diverging(engine, cfg):
            raise DivergenceError("tail too slow")

        with self._patched_suites({'_suite_semigroup': diverging}):
            with self.assertRaises(DivergenceError):
                ExperimentEngine(_config('verify', suite='semigroup', **SIX_FLAGS)).run()

    def _invert_with(self, values, errors):
        radii = [1.0, 2.0]
        recovered = RadialProfile.from_grid(
            radii, [math.exp(-1.0), math.exp(-4.0)], 0.0, NEG_INF,
            metadata={'requested_radii': radii, 'values': values, 'errors': errors,
                      'trusted_interval': (0.1, 10.0), 'method': 'numeric-growth'})
        config = _config('invert', profile='gaussian', at=radii, **SIX_FLAGS)
        with mock.patch('experiments.engine.tabulate', lambda profile, *a, **kw: profile), \
                mock.patch('experiments.engine.strichartz_invert_radial',
                           return_value=recovered):
            return ExperimentEngine(config).run()

    def test_invert_reports_failed_radii(self):
        """Test that a radius without a recovered value fails the inversion."""
        result = self._invert_with([math.exp(-1.0), float('nan')],
                                   ['r=2: no convergence after 8 refinements'])
        self.assertEqual(result['verdict'], 'fail')
        self.assertEqual(result['body']['max_relative_error'], float('inf'))
        self.assertEqual(len(result['errors']), 1)

        result = self._invert_with([math.exp(-1.0), float('nan')], [])
        self.assertEqual(result['verdict'], 'fail',
                         "A NaN value without an error message must still fail")

    def test_invert_exact_recovery_passes(self):
        """Test the pass verdict when every radius is recovered."""
        result = self._invert_with([math.exp(-1.0), math.exp(-4.0)], [])
        self.assertEqual(result['verdict'], 'pass')
        self.assertAlmostEqual(result['body']['max_relative_error'], 0.0)


if __name__ == '__main__':
    unittest.main()
