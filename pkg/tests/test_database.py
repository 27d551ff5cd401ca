import sqlite3
from unittest.mock import patch

from modules.database import delete_automorphism, get_automorphism, init_db, save_automorphism


class TestInitDb:
    def test_creates_table(self, tmp_db):
        init_db()
        # Should not raise on second call
        init_db()


class TestSaveAndGet:
    def test_round_trip(self, tmp_db):
        init_db()
        assert save_automorphism("S6-outer", 6, "(1 2)(3 4)(5 6)", "(1 2 3)(4 5)", created_at="2026-01-01T00:00:00")

        row = get_automorphism("S6-outer")
        assert row == {
            "label": "S6-outer",
            "degree": 6,
            "t_image": "(1 2)(3 4)(5 6)",
            "c_image": "(1 2 3)(4 5)",
            "created_at": "2026-01-01T00:00:00",
        }

    def test_get_missing(self, tmp_db):
        init_db()
        assert get_automorphism("nope") is None

    def test_replace_existing(self, tmp_db):
        init_db()
        save_automorphism("S6-outer", 6, "(1 2)", "(1 2 3 4 5 6)")
        save_automorphism("S6-outer", 6, "(1 2)(3 4)(5 6)", "(1 2 3)(4 5)")
        assert get_automorphism("S6-outer")["t_image"] == "(1 2)(3 4)(5 6)"

    def test_created_at_defaults_to_now(self, tmp_db):
        init_db()
        save_automorphism("S6-outer", 6, "(1 2)", "(1 2 3 4 5 6)")
        assert get_automorphism("S6-outer")["created_at"]


class TestDeleteAutomorphism:
    def test_delete_existing(self, tmp_db):
        init_db()
        save_automorphism("S6-outer", 6, "(1 2)", "(1 2 3 4 5 6)")

        assert delete_automorphism("S6-outer") is True
        assert get_automorphism("S6-outer") is None

    def test_delete_not_found(self, tmp_db):
        init_db()
        assert delete_automorphism("S6-outer") is False


class TestErrors:
    def test_missing_table(self, tmp_db):
        # no init_db: every call fails inside sqlite and is reported as a miss
        assert get_automorphism("S6-outer") is None
        assert save_automorphism("S6-outer", 6, "(1 2)", "(1 2 3 4 5 6)") is False
        assert delete_automorphism("S6-outer") is False

    def test_connection_failure(self, tmp_db):
        with patch("modules.database.sqlite3.connect", side_effect=sqlite3.OperationalError("locked")):
            assert get_automorphism("S6-outer") is None
            assert save_automorphism("S6-outer", 6, "(1 2)", "(1 2 3 4 5 6)") is False
