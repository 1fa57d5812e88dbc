"""SQLite run log for experiment invocations."""

import json
import logging
import os
import sqlite3
from datetime import datetime, timezone
from typing import Any, Dict, List, Mapping, Optional

from numerics.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_DB_PATH = 'data/runs.db'

SCHEMA = """
    CREATE TABLE IF NOT EXISTS run_log (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        command TEXT NOT NULL,
        config_json TEXT NOT NULL,
        seed INTEGER,
        verdict TEXT,
        status TEXT NOT NULL DEFAULT 'running',
        error_message TEXT,
        started_at TEXT NOT NULL,
        completed_at TEXT,
        output_path TEXT
    )
"""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


class RunStore:
    """Records one row per CLI run: what was asked, with which seed, and how it ended."""

    def __init__(self, path: str = DEFAULT_DB_PATH):
        """Initialize the run store.

        Args:
            path: SQLite file; ':memory:' keeps the log in memory
        """
        self.path = path
        self.conn: Optional[sqlite3.Connection] = None

    def connect(self) -> 'RunStore':
        """Open the database and create the run_log table if needed.

        Raises:
            ConfigError: the file cannot be opened
        """
        try:
            if self.path != ':memory:':
                directory = os.path.dirname(self.path)
                if directory:
                    os.makedirs(directory, exist_ok=True)
            self.conn = sqlite3.connect(self.path)
            self.execute(SCHEMA)
        except (OSError, sqlite3.Error) as e:
            raise ConfigError(f"cannot open run log {self.path}: {e}") from e
        logger.debug("run log at %s", self.path)
        return self

    def disconnect(self):
        if self.conn:
            self.conn.close()
            self.conn = None

    def __enter__(self) -> 'RunStore':
        return self.connect()

    def __exit__(self, *exc_info):
        self.disconnect()

    def execute(self, query: str, params: tuple = ()) -> List[Dict[str, Any]]:
        """Execute a query and return the rows as dictionaries.

        Args:
            query: SQL with ? placeholders
            params: Query parameters
        """
        if not self.conn:
            raise ConnectionError("run log is not connected")
        try:
            cur = self.conn.cursor()
            cur.execute(query, params)
            if cur.description:
                columns = [desc[0] for desc in cur.description]
                rows = [dict(zip(columns, row)) for row in cur.fetchall()]
            else:
                rows = []
            self.conn.commit()
            cur.close()
            return rows
        except sqlite3.Error:
            self.conn.rollback()
            raise

    def log_run_start(self, command: str, config: Mapping[str, Any],
                      seed: Optional[int] = None) -> int:
        """Insert a 'running' row and return its id."""
        self.execute(
            "INSERT INTO run_log (command, config_json, seed, started_at) VALUES (?, ?, ?, ?)",
            (command, json.dumps(config, sort_keys=True, default=str), seed, _now()))
        return self.execute("SELECT last_insert_rowid() AS id")[0]['id']

    def log_run_complete(self, run_id: int, status: str, verdict: Optional[str] = None,
                         output_path: Optional[str] = None,
                         error_message: Optional[str] = None):
        self.execute(
            """
            UPDATE run_log
            SET status = ?, verdict = ?, output_path = ?, error_message = ?, completed_at = ?
            WHERE id = ?
            """,
            (status, verdict, output_path, error_message, _now(), run_id))

    def recent_runs(self, limit: int = 10, command: Optional[str] = None
                    ) -> List[Dict[str, Any]]:
        """Most recent runs first, optionally restricted to one subcommand."""
        if command:
            return self.execute(
                "SELECT * FROM run_log WHERE command = ? ORDER BY id DESC LIMIT ?",
                (command, int(limit)))
        return self.execute("SELECT * FROM run_log ORDER BY id DESC LIMIT ?", (int(limit),))

    def run_count(self) -> int:
        return self.execute("SELECT COUNT(*) AS n FROM run_log")[0]['n']
