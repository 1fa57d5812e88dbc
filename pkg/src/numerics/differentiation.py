"""The operator D = (1/(2t)) d/dt by Richardson-extrapolated differences.

With x = t², D is plain d/dx, so (±D)^m φ(t) is the m-th x-derivative of
g(x) = φ(√x).  Central differences in x have an error expansion in even
powers of the step, which three Richardson levels remove up to h^6.
"""

import logging
import math
from typing import Callable, Union

import numpy as np
from scipy.special import comb

from numerics.errors import DomainError, QuadratureAccuracyError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# relative disagreement between the last two Richardson columns that marks
# a derivative as noise-dominated
NOISE_TOLERANCE = 1e-3


def _central_difference(g_values: np.ndarray, order: int, step: np.ndarray) -> np.ndarray:
    coefficients = np.array([(-1) ** i * comb(order, i, exact=True) for i in range(order + 1)],
                            dtype=float)
    return (g_values * coefficients).sum(axis=-1) / step ** order


def apply_D(phi: Callable[[np.ndarray], np.ndarray], t: ArrayLike, order: int,
            sign: int = 1, accuracy: float = 1e-13) -> ArrayLike:
    """Evaluate (±D)^order φ at t.

    Args:
        phi: Vectorized profile
        t: Evaluation point(s), all > 0
        order: Positive integer power of D
        sign: +1 or -1
        accuracy: Relative evaluation accuracy ε of φ; sets the step
            h = 2t²·ε^{1/(order+2)} in the x = t² variable

    Returns:
        The derivative value(s)

    Raises:
        DomainError: t <= 0, order < 1 or sign not ±1
        QuadratureAccuracyError: the extrapolation is noise-dominated
    """
    if order < 1 or int(order) != order:
        raise DomainError(f"order must be a positive integer, got {order}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise DomainError("apply_D requires t > 0")
    order = int(order)

    x = t_arr ** 2
    eps = max(float(accuracy), 1e-16)
    base = 2.0 * x * eps ** (1.0 / (order + 2))
    levels = 3
    offsets = order / 2.0 - np.arange(order + 1)
    steps = base[:, None] / 2.0 ** np.arange(levels)[None, :]
    points = x[:, None, None] + steps[:, :, None] * offsets[None, None, :]
    g = np.asarray(phi(np.sqrt(points.ravel())), dtype=float).reshape(points.shape)
    estimates = _central_difference(g, order, steps)

    # Richardson on h, h/2, h/4 with even-power error terms
    first = (4.0 * estimates[:, 1:] - estimates[:, :-1]) / 3.0
    second = (16.0 * first[:, 1] - first[:, 0]) / 15.0
    disagreement = np.abs(second - first[:, 1])

    centre = np.abs(np.asarray(phi(t_arr), dtype=float))
    scale = np.abs(second) + centre / x ** order
    if np.any(disagreement > NOISE_TOLERANCE * scale):
        worst = int(np.argmax(disagreement / np.where(scale > 0, scale, 1.0)))
        raise QuadratureAccuracyError(
            f"derivative of order {order} is noise-dominated at t={t_arr[worst]:g}",
            estimate=second * sign ** order, error_bound=float(disagreement[worst]))

    result = (sign ** order) * second
    return float(result[0]) if np.ndim(t) == 0 else result.reshape(np.shape(t))


def step_width(t: float, order: int, accuracy: float = 1e-13) -> float:
    """Half-width in t of the widest stencil used by apply_D at t."""
    eps = max(float(accuracy), 1e-16)
    x = t * t
    reach = x + 2.0 * x * eps ** (1.0 / (order + 2)) * order / 2.0
    return math.sqrt(reach) - t
