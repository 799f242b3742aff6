"""
Unit tests for the row-chunked executor.
"""

import threading

import numpy as np
import pytest

from ...exceptions import ParameterError
from ..parallel import ChunkedExecutor, default_workers


class TestChunkedExecutor:
    """Test chunking, ordering and error propagation."""

    def test_bounds(self):
        executor = ChunkedExecutor(chunk_size=4)

        assert executor.bounds(10) == [(0, 4), (4, 8), (8, 10)]

    def test_results_in_chunk_order(self):
        rows = np.arange(100, dtype=float).reshape(50, 2)
        executor = ChunkedExecutor(max_workers=4, chunk_size=7)

        chunks = executor.map_rows(lambda block: block[:, 0].copy(), rows)

        np.testing.assert_array_equal(np.concatenate(chunks), rows[:, 0])
        assert executor.stats.chunks == 8
        assert executor.stats.rows == 50

    def test_uses_threads(self):
        seen: set[int] = set()
        lock = threading.Lock()

        def record(block):
            with lock:
                seen.add(threading.get_ident())
            return block.shape[0]

        executor = ChunkedExecutor(max_workers=1, chunk_size=3)
        assert sum(executor.map_rows(record, np.zeros((10, 1)))) == 10
        assert seen == {threading.get_ident()}

    def test_error_propagates(self):
        def fail(block):
            if block[0, 0] > 5:
                raise ValueError("bad chunk")
            return block

        executor = ChunkedExecutor(max_workers=3, chunk_size=2)

        with pytest.raises(ValueError, match="bad chunk"):
            executor.map_rows(fail, np.arange(10, dtype=float).reshape(10, 1))

    def test_invalid_chunk_size(self):
        with pytest.raises(ParameterError):
            ChunkedExecutor(chunk_size=0)

    def test_default_workers(self):
        assert 1 <= default_workers() <= 32
        assert ChunkedExecutor(max_workers=None).max_workers == default_workers()
        assert ChunkedExecutor(max_workers=0).max_workers == 1
