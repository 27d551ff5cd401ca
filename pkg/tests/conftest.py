import os
import sys
import tempfile

import pytest

# Set env vars BEFORE any src/ module is imported.
# config.py runs load_dotenv() and int()/float() on them at import time.
os.environ.setdefault("TSS_SYM_CAP", "8")
os.environ.setdefault("TSS_ELEMENT_CAP", "100000")
os.environ.setdefault("TSS_TABLE_CAP", "5040")
os.environ.setdefault("TSS_BUDGET_SECONDS", "600")
os.environ.setdefault("TSS_JOBS", "1")
os.environ.setdefault("TSS_DB_PATH", os.path.join(tempfile.gettempdir(), "tss_test_cache.db"))
os.environ.setdefault("TSS_LOG_LEVEL", "WARNING")

# Add src/ to sys.path so test imports work
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


@pytest.fixture()
def tmp_db(monkeypatch):
    """Provide a temporary database file and patch database.DB_PATH."""
    import modules.database as db_mod

    fd, path = tempfile.mkstemp(suffix=".db")
    os.close(fd)
    monkeypatch.setattr(db_mod, "DB_PATH", path)
    yield path
    for suffix in ("", "-wal", "-shm"):
        if os.path.exists(path + suffix):
            os.unlink(path + suffix)


@pytest.fixture(scope="session")
def s3():
    from modules.groups import symmetric_group

    return symmetric_group(3)


@pytest.fixture(scope="session")
def s4():
    from modules.groups import symmetric_group

    return symmetric_group(4)


@pytest.fixture(scope="session")
def s5():
    from modules.groups import symmetric_group

    return symmetric_group(5)


@pytest.fixture()
def ids_of():
    """Element ids of cycle-notation strings in a group."""
    from modules.permutation import parse_perm

    def _ids(group, *texts):
        return tuple(group.id_of(parse_perm(t, group.degree)) for t in texts)

    return _ids
