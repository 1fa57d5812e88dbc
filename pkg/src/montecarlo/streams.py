"""Independent random streams evaluated on a thread pool.

A run of N samples is split over a fixed number of streams, each seeded by a
child of ``SeedSequence(seed, spawn_key=(key,))``.  Samples are concatenated
in stream order, so the result depends on (seed, key, streams) only and not
on the number of workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from numerics.errors import DomainError
from numerics.parallel import default_workers

logger = logging.getLogger(__name__)

DEFAULT_STREAMS = 8
# samples drawn per vectorized batch inside one stream
BATCH_SIZE = 8192

Sampler = Callable[[np.random.Generator, int], np.ndarray]


def fresh_seed() -> int:
    """64-bit seed from OS entropy, for runs that did not fix one."""
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])


def stream_sizes(n_samples: int, streams: int) -> List[int]:
    base, extra = divmod(int(n_samples), int(streams))
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _run_stream(sampler: Sampler, seed_seq: np.random.SeedSequence, size: int) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    pieces = []
    remaining = size
    while remaining > 0:
        batch = min(BATCH_SIZE, remaining)
        pieces.append(np.asarray(sampler(rng, batch), dtype=float).reshape(batch))
        remaining -= batch
    return np.concatenate(pieces) if pieces else np.zeros(0)


def run_streams(sampler: Sampler, n_samples: int, seed: int, key: int = 0,
                streams: int = DEFAULT_STREAMS, workers: Optional[int] = None) -> np.ndarray:
    """Draw ``n_samples`` values of ``sampler`` over independent streams.

    Args:
        sampler: (generator, batch size) -> array of that many sample values
        n_samples: Total number of samples
        seed: Root seed
        key: Distinguishes independent estimators sharing one root seed
        streams: Number of substreams (fixes the result)
        workers: Thread count; defaults to STRICHARTZ_THREADS or 1
    """
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples for a standard error, got {n_samples}")
    if streams < 1:
        raise DomainError(f"need at least one stream, got {streams}")
    children = np.random.SeedSequence(seed, spawn_key=(int(key),)).spawn(streams)
    sizes = stream_sizes(n_samples, streams)
    workers = default_workers() if workers is None else max(1, int(workers))
    logger.debug("%d samples over %d streams on %d workers", n_samples, streams, workers)

    if workers == 1:
        results = [_run_stream(sampler, child, size) for child, size in zip(children, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda task: _run_stream(sampler, *task),
                                        zip(children, sizes)))
    return np.concatenate(results)
