"""Thread-pool evaluation of radial functions over many radii."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from numerics.errors import StrichartzError

logger = logging.getLogger(__name__)

THREADS_ENV = 'STRICHARTZ_THREADS'


def default_workers() -> int:
    """Worker count from the environment, falling back to 1."""
    raw = os.environ.get(THREADS_ENV, '')
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1


def map_chunks(func: Callable[[np.ndarray], np.ndarray], points: Sequence[float],
               workers: Optional[int] = None, chunks: Optional[int] = None) -> np.ndarray:
    """Evaluate a vectorized ``func`` on ``points`` split into contiguous chunks.

    Results are concatenated in input order, so the output does not depend on
    the worker count.
    """
    points = np.asarray(points, dtype=float)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or points.size < 2:
        return np.asarray(func(points), dtype=float)
    pieces = np.array_split(points, min(points.size, chunks or workers))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(lambda chunk: np.asarray(func(chunk), dtype=float), pieces))
    return np.concatenate(results)


def _process_point(func: Callable[[np.ndarray], np.ndarray], t: float) -> Dict:
    result = {'radius': float(t), 'status': 'error', 'value': float('nan'), 'error': None}
    try:
        result['value'] = float(np.asarray(func(np.array([t])), dtype=float).ravel()[0])
        result['status'] = 'success'
    except StrichartzError as e:
        result['error'] = str(e)
    return result


def evaluate_pointwise(func: Callable[[np.ndarray], np.ndarray], points: Sequence[float],
                       workers: Optional[int] = None) -> Dict:
    """Evaluate ``func`` one radius at a time, collecting per-point failures.

    Returns a dict with ``values`` (NaN where a point failed), ``success``,
    ``failed`` and ``errors`` (one message per failed radius).
    """
    points = np.asarray(points, dtype=float)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        outcomes = [_process_point(func, t) for t in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(lambda t: _process_point(func, t), points))

    results = {'values': np.array([o['value'] for o in outcomes]),
               'success': 0, 'failed': 0, 'errors': []}
    for outcome in outcomes:
        if outcome['status'] == 'success':
            results['success'] += 1
        else:
            results['failed'] += 1
            results['errors'].append(f"t={outcome['radius']:g}: {outcome['error']}")
    if results['failed']:
        logger.warning("%d of %d radii failed", results['failed'], points.size)
    return results


def evaluate_with_fallback(func: Callable[[np.ndarray], np.ndarray], points: Sequence[float],
                           workers: Optional[int] = None) -> Dict:
    """Vectorized evaluation that degrades to per-point evaluation on failure."""
    points = np.asarray(points, dtype=float)
    try:
        values = map_chunks(func, points, workers)
        return {'values': values, 'success': points.size, 'failed': 0, 'errors': []}
    except StrichartzError as e:
        logger.info("vectorized evaluation failed (%s); retrying point by point", e)
    return evaluate_pointwise(func, points, workers)

