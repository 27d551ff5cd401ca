import math
from unittest.mock import MagicMock

from modules.workers import run_parallel


def test_inline_keeps_order():
    """A single job maps in this process, in input order."""
    assert run_parallel(math.factorial, [5, 3, 4], 1) == [120, 6, 24]


def test_pool_keeps_order():
    """Results from the pool come back in input order."""
    items = list(range(12, 0, -1))
    assert run_parallel(math.factorial, items, 3) == [math.factorial(i) for i in items]


def test_inline_runs_initializer_once():
    init = MagicMock()
    assert run_parallel(abs, [-1, -2], 1, initializer=init, initargs=("group", 5.0)) == [1, 2]
    init.assert_called_once_with("group", 5.0)


def test_single_item_stays_inline():
    """One work unit never starts a pool, so unpicklable callables are fine."""
    assert run_parallel(lambda x: x + 1, [1], 4) == [2]


def test_empty():
    assert run_parallel(abs, [], 4) == []
