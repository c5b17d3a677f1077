"""Seeded, chunked random streams.

Every sample of ``n`` draws is cut into fixed-size chunks; chunk ``k`` gets
its own PCG64 stream from ``SeedSequence(seed, spawn_key=(k,))``. Output
therefore depends only on ``(seed, n)`` and never on how many workers
process the chunks.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

CHUNK_SIZE = 1 << 16
MAX_SEED = (1 << 64) - 1


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed), spawn_key=(chunk,))))


def map_chunks(fn: Callable[[np.random.Generator, int], object], seed: int, n: int,
               workers: int = 1, chunk_size: int = CHUNK_SIZE) -> list:
    """Call ``fn(rng, size)`` once per chunk and return results in chunk order."""
    bounds = [(k, min(chunk_size, n - start)) for k, start in enumerate(range(0, n, chunk_size))]

    def run(item):
        k, size = item
        return fn(chunk_generator(seed, k), size)

    if workers <= 1 or len(bounds) <= 1:
        return [run(b) for b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, bounds))


def inverse_cdf(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index ``k`` with ``cdf[k-1] <= u < cdf[k]`` for each row/uniform pair.

    ``cdf_rows`` has shape (m, card) and must come from :func:`safe_cdf`, so
    zero-probability values are never returned.
    """
    return np.sum(u[:, None] >= cdf_rows[:, :-1], axis=1)


def safe_cdf(probs: np.ndarray) -> np.ndarray:
    """Cumulative sums along the last axis, pinned to exactly 1 from the
    last nonzero entry onward (guards against round-off below 1)."""
    probs = np.asarray(probs, dtype=float)
    cdf = np.cumsum(probs, axis=-1)
    nonzero = probs > 0
    card = probs.shape[-1]
    last = card - 1 - np.argmax(nonzero[..., ::-1], axis=-1)
    cols = np.arange(card)
    cdf = np.where(cols >= last[..., None], 1.0, cdf)
    return cdf
