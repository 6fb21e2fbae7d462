"""Thread-bounded row-block assembly with deterministic output order."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

_THREADS = 1


def set_threads(threads: int) -> None:
    """Set the process-wide bound on assembly threads."""
    global _THREADS
    if threads < 1:
        raise ValueError(f"Invalid thread count: {threads}. Must be >= 1")
    _THREADS = int(threads)


def get_threads() -> int:
    """Current bound on assembly threads."""
    return _THREADS


def assemble_rows(
    block_fn: Callable[[int, int], np.ndarray],
    n_rows: int,
    block_size: int = 256
) -> np.ndarray:
    """
    Assemble a matrix from row blocks.

    ``block_fn(start, stop)`` returns rows ``start:stop``. Blocks are
    computed on up to ``get_threads()`` workers and stacked in block order,
    so the result does not depend on scheduling.
    """
    bounds = [(s, min(s + block_size, n_rows)) for s in range(0, n_rows, block_size)]
    if not bounds:
        raise ValueError("cannot assemble a matrix with zero rows")
    if _THREADS == 1 or len(bounds) == 1:
        blocks = [block_fn(s, e) for s, e in bounds]
    else:
        with ThreadPoolExecutor(max_workers=_THREADS) as pool:
            blocks = list(pool.map(lambda se: block_fn(*se), bounds))
    return np.vstack(blocks)
