"""
Row-chunked thread pool for the E-step.

Observations are split into fixed-size chunks that are processed concurrently
and reassembled in chunk order, so the concatenated result only depends on
the chunk size and never on the number of workers.
"""

import logging
import os
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Generic, TypeVar

from ..custom_types import FloatArray
from ..exceptions import ParameterError

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_CHUNK_SIZE = 2048


def default_workers() -> int:
    """Worker count from the CPU affinity mask, capped at 32."""
    try:
        if hasattr(os, "sched_getaffinity"):
            return min(32, len(os.sched_getaffinity(0)))
        return 4
    except (AttributeError, OSError):
        return 4


@dataclass
class ChunkStats:
    """
    Statistics of the most recent mapped call.

    Attributes:
        rows: Rows processed
        chunks: Number of chunks
        elapsed: Wall time in seconds
    """

    rows: int = 0
    chunks: int = 0
    elapsed: float = 0.0


@dataclass
class RowChunk(Generic[T]):
    """Result of one chunk together with its position."""

    index: int
    start: int
    value: T


class ChunkedExecutor:
    """
    Map a function over contiguous row blocks of a data matrix.

    Args:
        max_workers: Worker threads; ``None`` picks from the CPU affinity and
            1 runs everything on the calling thread
        chunk_size: Rows per chunk
    """

    def __init__(
        self, max_workers: int | None = 1, chunk_size: int = DEFAULT_CHUNK_SIZE
    ) -> None:
        if chunk_size < 1:
            raise ParameterError(
                f"chunk_size must be >= 1, got {chunk_size}", chunk_size=chunk_size
            )
        if max_workers is None:
            max_workers = default_workers()
        self.max_workers = max(1, max_workers)
        self.chunk_size = chunk_size
        self.stats = ChunkStats()
        logger.debug(
            f"ChunkedExecutor initialized with {self.max_workers} workers, "
            f"chunk size {self.chunk_size}"
        )

    def bounds(self, n: int) -> list[tuple[int, int]]:
        """Half-open row ranges of every chunk, in order."""
        return [
            (start, min(start + self.chunk_size, n))
            for start in range(0, n, self.chunk_size)
        ]

    def map_rows(self, func: Callable[[FloatArray], T], rows: FloatArray) -> list[T]:
        """
        Apply ``func`` to each row chunk and return the results in chunk order.

        The first exception raised by any chunk cancels the remaining chunks
        and is re-raised unchanged.
        """
        start_time = time.perf_counter()
        bounds = self.bounds(rows.shape[0])
        if self.max_workers == 1 or len(bounds) == 1:
            results = [func(rows[lo:hi]) for lo, hi in bounds]
        else:
            results = self._map_concurrent(func, rows, bounds)
        self.stats = ChunkStats(
            rows=rows.shape[0],
            chunks=len(bounds),
            elapsed=time.perf_counter() - start_time,
        )
        return results

    def _map_concurrent(
        self,
        func: Callable[[FloatArray], T],
        rows: FloatArray,
        bounds: list[tuple[int, int]],
    ) -> list[T]:
        done: list[RowChunk[T]] = []
        workers = min(self.max_workers, len(bounds))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_chunk = {
                executor.submit(func, rows[lo:hi]): (index, lo)
                for index, (lo, hi) in enumerate(bounds)
            }
            for future in as_completed(future_to_chunk):
                index, lo = future_to_chunk[future]
                try:
                    done.append(RowChunk(index, lo, future.result()))
                except Exception:
                    for pending in future_to_chunk:
                        pending.cancel()
                    logger.debug(f"Chunk {index} starting at row {lo} failed")
                    raise
        done.sort(key=lambda chunk: chunk.index)
        return [chunk.value for chunk in done]
