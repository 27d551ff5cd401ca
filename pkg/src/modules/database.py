import logging
import sqlite3
from datetime import datetime

from config import DB_PATH

logger = logging.getLogger(__name__)


def init_db():
    """Create the cache tables."""
    with sqlite3.connect(DB_PATH) as connection:
        connection.execute("PRAGMA journal_mode=WAL")
        connection.execute("""
        CREATE TABLE IF NOT EXISTS automorphisms (
            label      TEXT PRIMARY KEY,
            degree     INTEGER NOT NULL,
            t_image    TEXT NOT NULL,
            c_image    TEXT NOT NULL,
            created_at TEXT NOT NULL
        )
        """)
        connection.commit()
    logger.debug(f"Cache database ready at {DB_PATH}")


def save_automorphism(label, degree, t_image, c_image, created_at=None):
    """Store the images of (1 2) and (1 2 … n), in cycle notation, under ``label``."""
    created_at = created_at or datetime.now().isoformat(timespec="seconds")
    try:
        with sqlite3.connect(DB_PATH) as connection:
            connection.execute(
                """
            INSERT OR REPLACE INTO automorphisms (label, degree, t_image, c_image, created_at)
            VALUES (?, ?, ?, ?, ?)
            """,
                (label, degree, t_image, c_image, created_at),
            )
            connection.commit()
        logger.info(f"Automorphism {label} cached: (1 2) -> {t_image}, long cycle -> {c_image}")
        return True
    except sqlite3.Error as e:
        logger.error(f"Failed to cache automorphism {label}: {e}")
        return False


def get_automorphism(label):
    """Cached row for ``label`` as a dict, or None."""
    try:
        with sqlite3.connect(DB_PATH) as connection:
            connection.row_factory = sqlite3.Row
            cursor = connection.execute(
                "SELECT label, degree, t_image, c_image, created_at FROM automorphisms WHERE label = ?",
                (label,),
            )
            row = cursor.fetchone()
            if row:
                return dict(row)
            return None
    except sqlite3.Error as e:
        logger.error(f"Failed to read cached automorphism {label}: {e}")
        return None


def delete_automorphism(label):
    try:
        with sqlite3.connect(DB_PATH) as connection:
            cursor = connection.execute("DELETE FROM automorphisms WHERE label = ?", (label,))
            connection.commit()
            if cursor.rowcount > 0:
                logger.info(f"Cached automorphism {label} removed.")
                return True
            logger.warning(f"No cached automorphism {label} to remove.")
            return False
    except sqlite3.Error as e:
        logger.error(f"Failed to remove cached automorphism {label}: {e}")
        return False
