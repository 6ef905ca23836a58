"""Settings, run ledger and log file for the W-series tool - self-contained."""

import os
import sqlite3
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional


ENV_PREFIX = 'W_SERIES_'

DEFAULT_SETTINGS = {
    'precision_bits': '107',
    'triangle_cap': '200',
    'boundary_samples': '400',
    'bisection_iterations': '200',
}


def get_app_dir() -> Path:
    """Get the application directory."""
    if getattr(sys, 'frozen', False):
        return Path(sys.executable).parent
    else:
        return Path(__file__).parent


def get_data_dir() -> Path:
    """Get the data directory (creates if needed)."""
    data_dir = get_app_dir() / "data"
    data_dir.mkdir(exist_ok=True)
    return data_dir


def get_log_path() -> Path:
    """Get the path of the append-only log."""
    return get_data_dir() / "w_series.log"


def _log_error(message: str):
    """Log error to w_series.log in data dir."""
    log_event(f"ERROR {message}")


def log_event(message: str):
    """Append a timestamped line to w_series.log. Never raises."""
    try:
        with open(get_log_path(), 'a') as f:
            f.write(f"{datetime.now().isoformat()} - {message}\n")
    except Exception:
        pass  # Can't even log, give up


DB_PATH = None


def get_db_path() -> Path:
    """Get the database path."""
    global DB_PATH
    if DB_PATH is None:
        DB_PATH = get_app_dir() / "data" / "w_series.db"
    return DB_PATH


def get_connection() -> sqlite3.Connection:
    """Get database connection with row factory."""
    db_path = get_db_path()
    db_path.parent.mkdir(exist_ok=True)
    conn = sqlite3.connect(db_path)
    conn.row_factory = sqlite3.Row
    return conn


def init_db():
    """Initialize all database tables."""
    conn = get_connection()
    cursor = conn.cursor()

    cursor.execute("""
        CREATE TABLE IF NOT EXISTS settings (
            key TEXT PRIMARY KEY,
            value TEXT NOT NULL
        )
    """)

    # One row per CLI invocation
    cursor.execute("""
        CREATE TABLE IF NOT EXISTS runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            command TEXT NOT NULL,
            arguments TEXT,
            exit_code INTEGER NOT NULL,
            started_at TEXT NOT NULL,
            finished_at TEXT NOT NULL
        )
    """)

    conn.commit()
    conn.close()


# === Settings ===

def _env_key(key: str) -> str:
    return ENV_PREFIX + key.upper()


def get_setting(key: str, default: Optional[str] = None) -> str:
    """Get a setting value: environment, then settings table, then default.

    The database file is only read, never created, so numeric code can call
    this without side effects.
    """
    env_value = os.environ.get(_env_key(key))
    if env_value:
        return env_value

    if default is None:
        default = DEFAULT_SETTINGS.get(key, '')

    if not get_db_path().exists():
        return default
    try:
        conn = get_connection()
        cursor = conn.cursor()
        cursor.execute("SELECT value FROM settings WHERE key = ?", (key,))
        row = cursor.fetchone()
        conn.close()
    except sqlite3.Error as e:
        _log_error(f"settings lookup for {key} failed: {e}")
        return default
    return row['value'] if row else default


def get_int_setting(key: str) -> int:
    """Get a setting that must parse as a positive integer."""
    from errors import ConfigError

    raw = get_setting(key)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"setting {key} must be an integer, got {raw!r}")
    if value <= 0:
        raise ConfigError(f"setting {key} must be positive, got {value}")
    return value


def set_setting(key: str, value: str):
    """Set a setting value."""
    init_db()
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute(
        "INSERT OR REPLACE INTO settings (key, value) VALUES (?, ?)",
        (key, value)
    )
    conn.commit()
    conn.close()


def delete_setting(key: str):
    """Remove a setting so its default applies again."""
    init_db()
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute("DELETE FROM settings WHERE key = ?", (key,))
    conn.commit()
    conn.close()


def get_settings() -> Dict[str, str]:
    """Get every known setting with its effective value."""
    settings = dict(DEFAULT_SETTINGS)
    if get_db_path().exists():
        conn = get_connection()
        cursor = conn.cursor()
        cursor.execute("SELECT key, value FROM settings ORDER BY key")
        for row in cursor.fetchall():
            settings[row['key']] = row['value']
        conn.close()
    for key in list(settings):
        env_value = os.environ.get(_env_key(key))
        if env_value:
            settings[key] = env_value
    return settings


# === Run ledger ===

def record_run(command: str, arguments: List[str], exit_code: int,
               started_at: datetime) -> int:
    """Record a CLI invocation, return its ID."""
    init_db()
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute("""
        INSERT INTO runs (command, arguments, exit_code, started_at, finished_at)
        VALUES (?, ?, ?, ?, ?)
    """, (command, ' '.join(arguments), exit_code,
          started_at.isoformat(), datetime.now().isoformat()))
    run_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return run_id


def get_runs(limit: int = 20) -> List[Dict[str, Any]]:
    """Get recent runs, newest first."""
    if not get_db_path().exists():
        return []
    conn = get_connection()
    cursor = conn.cursor()
    cursor.execute("""
        SELECT * FROM runs
        ORDER BY id DESC
        LIMIT ?
    """, (limit,))
    rows = cursor.fetchall()
    conn.close()
    return [dict(row) for row in rows]
