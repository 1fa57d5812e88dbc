"""Unit tests for RunStore."""

import os
import sys
import tempfile
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))

from numerics.errors import ConfigError
from storage.run_store import RunStore


class TestRunStore(unittest.TestCase):
    """Test cases for RunStore class."""

    def setUp(self):
        """Set up test fixtures."""
        self.store = RunStore(':memory:').connect()

    def tearDown(self):
        self.store.disconnect()

    def test_connection(self):
        """Test that connecting creates the run_log table."""
        self.assertIsNotNone(self.store.conn, "Connection should be open")
        self.assertEqual(self.store.run_count(), 0, "A fresh log should be empty")

    def test_run_lifecycle(self):
        """Test logging a run from start to completion."""
        run_id = self.store.log_run_start('constants', {'n': 6, 'name': 'c1'}, seed=7)
        self.assertIsNotNone(run_id, "Run ID should be returned")

        row = self.store.recent_runs(1)[0]
        self.assertEqual(row['status'], 'running')
        self.assertEqual(row['seed'], 7)
        self.assertIsNone(row['completed_at'])

        self.store.log_run_complete(run_id, 'completed', verdict='pass',
                                    output_path='results/c1.json')
        row = self.store.recent_runs(1)[0]
        self.assertEqual(row['status'], 'completed')
        self.assertEqual(row['verdict'], 'pass')
        self.assertEqual(row['output_path'], 'results/c1.json')
        self.assertIsNotNone(row['completed_at'], "Completion time should be set")

    def test_error_runs(self):
        """Test that failed runs keep their error message."""
        run_id = self.store.log_run_start('transform', {'profile': 'power-law:1'})
        self.store.log_run_complete(run_id, 'error', error_message='transform diverges')
        row = self.store.recent_runs(1)[0]
        self.assertEqual(row['status'], 'error')
        self.assertEqual(row['error_message'], 'transform diverges')

    def test_recent_runs_order_and_filter(self):
        """Test newest-first ordering, limits and command filtering."""
        for command in ('constants', 'verify', 'constants'):
            self.store.log_run_start(command, {})
        runs = self.store.recent_runs(10)
        self.assertEqual(len(runs), 3)
        self.assertGreater(runs[0]['id'], runs[1]['id'], "Newest run should come first")
        self.assertEqual(len(self.store.recent_runs(2)), 2)
        self.assertEqual(len(self.store.recent_runs(10, command='constants')), 2)
        self.assertEqual(self.store.run_count(), 3)

    def test_file_database(self):
        """Test that a file-backed log persists across connections."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'nested', 'runs.db')
            with RunStore(path) as store:
                store.log_run_start('history', {})
            with RunStore(path) as store:
                self.assertEqual(store.run_count(), 1, "Run should persist on disk")

    def test_unopenable_path(self):
        """Test that an unusable path raises ConfigError."""
        with tempfile.NamedTemporaryFile() as blocker:
            with self.assertRaises(ConfigError):
                RunStore(os.path.join(blocker.name, 'runs.db')).connect()

    def test_disconnected_execute(self):
        """Test that queries need a connection."""
        store = RunStore(':memory:')
        with self.assertRaises(ConnectionError):
            store.run_count()


if __name__ == '__main__':
    unittest.main()
