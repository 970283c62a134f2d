import sqlite3
from typing import List, Optional, Dict, Any
from pathlib import Path
import logging
from datetime import datetime

from montecarlo import SimReport
from config import MAX_RUN_HISTORY_ENTRIES, RUNS_DB_FILE


class RunDatabase:
    """History of recorded Monte Carlo runs."""

    def __init__(self, db_path: Optional[Path] = None):
        self.db_path = db_path or Path(RUNS_DB_FILE)
        self.logger = logging.getLogger(__name__)
        self._initialize_database()

    def _initialize_database(self) -> None:
        """Create the simulation_runs table if it doesn't exist."""
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                cursor.execute('''
                    CREATE TABLE IF NOT EXISTS simulation_runs (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        timestamp TEXT NOT NULL,
                        m INTEGER NOT NULL,
                        n INTEGER NOT NULL,
                        trials INTEGER NOT NULL,
                        seed INTEGER NOT NULL,
                        sampler TEXT NOT NULL,
                        hits INTEGER NOT NULL,
                        theoretical_num TEXT NOT NULL,
                        theoretical_den TEXT NOT NULL,
                        duration_seconds REAL
                    )
                ''')
                conn.commit()

        except sqlite3.Error as e:
            self.logger.error(f"Database initialization error: {e}")
            raise

    def _get_connection(self) -> sqlite3.Connection:
        return sqlite3.connect(str(self.db_path))

    def log_run(self, report: SimReport, sampler: str = "gaussian", duration_seconds: float = 0.0) -> Optional[int]:
        """Store a finished run and trim the oldest entries. Returns the new row id."""
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                # big integers do not fit SQLite INTEGER for large m
                cursor.execute('''
                    INSERT INTO simulation_runs
                        (timestamp, m, n, trials, seed, sampler, hits, theoretical_num, theoretical_den, duration_seconds)
                    VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
                ''', (
                    datetime.now().isoformat(),
                    report.m,
                    report.n,
                    report.trials,
                    report.seed,
                    sampler,
                    report.hits,
                    str(report.theoretical.numerator),
                    str(report.theoretical.denominator),
                    duration_seconds,
                ))
                run_id = cursor.lastrowid
                conn.commit()

            self._cleanup_history()
            self.logger.info(f"Recorded {report.m}x{report.n} run: {report.hits}/{report.trials} hits in {duration_seconds:.1f}s")
            return run_id

        except sqlite3.Error as e:
            self.logger.error(f"Error recording simulation run: {e}")
            return None

    def _cleanup_history(self) -> None:
        """Keep only the newest MAX_RUN_HISTORY_ENTRIES runs."""
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                cursor.execute('SELECT COUNT(*) FROM simulation_runs')
                count = cursor.fetchone()[0]

                if count > MAX_RUN_HISTORY_ENTRIES:
                    to_delete = count - MAX_RUN_HISTORY_ENTRIES
                    cursor.execute('''
                        DELETE FROM simulation_runs
                        WHERE id IN (
                            SELECT id FROM simulation_runs
                            ORDER BY id ASC
                            LIMIT ?
                        )
                    ''', (to_delete,))
                    self.logger.info(f"Cleaned up run history: deleted {to_delete} oldest entries")

                conn.commit()

        except sqlite3.Error as e:
            self.logger.error(f"Error cleaning up run history: {e}")

    def get_run_history(self, limit: int = 10) -> List[Dict[str, Any]]:
        """Newest runs first, each as SimReport.to_dict() plus timestamp, sampler and duration."""
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                cursor.execute('''
                    SELECT timestamp, m, n, trials, seed, sampler, hits, theoretical_num, theoretical_den, duration_seconds
                    FROM simulation_runs
                    ORDER BY id DESC
                    LIMIT ?
                ''', (limit,))
                rows = cursor.fetchall()

            history = []
            for row in rows:
                report = SimReport.from_dict({
                    'm': row[1],
                    'n': row[2],
                    'trials': row[3],
                    'seed': row[4],
                    'hits': row[6],
                    'theoretical_num': int(row[7]),
                    'theoretical_den': int(row[8]),
                })
                entry = report.to_dict()
                entry.update({'timestamp': row[0], 'sampler': row[5], 'duration_seconds': row[9]})
                history.append(entry)
            return history

        except sqlite3.Error as e:
            self.logger.error(f"Error getting run history: {e}")
            return []

    def clear_history(self) -> int:
        """Remove every recorded run. Returns the number removed, or -1 on error."""
        try:
            with self._get_connection() as conn:
                cursor = conn.cursor()
                cursor.execute('SELECT COUNT(*) FROM simulation_runs')
                count_before = cursor.fetchone()[0]
                cursor.execute('DELETE FROM simulation_runs')
                conn.commit()

            self.logger.info(f"Cleared run history. Removed {count_before} runs.")
            return count_before

        except sqlite3.Error as e:
            self.logger.error(f"Error clearing run history: {e}")
            return -1
