"""Double-exponential quadrature for algebraic endpoint singularities and tails.

Every fractional operator in the package reduces to integrals with kernels of
the form (t²-r²)^{α-1}, so the integrator works with declared endpoint powers:
``integrate_singular`` integrates ``(x-a)^eL (b-x)^eR f(x)`` with the two
powers evaluated from exactly computed endpoint distances.  The integrand
``f`` only carries the remaining (bounded) factor.

Integrands are vectorized: ``f`` receives a 1-D array of nodes and may return
either an array of the same length or an array of shape ``(..., len(nodes))``
when several integrals are evaluated at once (one per leading index).  The
result then has the leading shape.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import special

from numerics.errors import DivergenceError, DomainError, QuadratureAccuracyError
from numerics.special import beta_function

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
Integrand = Callable[[np.ndarray], np.ndarray]

# Smallest endpoint distance kept in the rule (stays clear of subnormals).
_TINY = 1e-300
_T_MAX_CAP = 6.5
# endpoint powers below this get endpoint-value subtraction
_STRONG_SINGULARITY = -0.75
# relative offset at which the left endpoint value is sampled for subtraction
_SUBTRACTION_OFFSET = 1e-14


class TailPolicy(Enum):
    """How semi-infinite integrals are closed."""
    ANALYTIC_POWER = 'analytic-power-tail'
    EXPONENTIAL = 'exponential-tail'
    HARD_CUTOFF = 'hard-cutoff'


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and tail handling for one family of integrals."""
    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    max_refinements: int = 8
    tail_cutoff_policy: TailPolicy = TailPolicy.ANALYTIC_POWER
    r_max: Optional[float] = None
    # peak |integrand scale|; rel_tol * magnitude acts as an absolute floor
    magnitude: float = 0.0

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise DomainError("rel_tol and abs_tol must be strictly positive")
        if not self.magnitude >= 0:
            raise DomainError(f"magnitude must be nonnegative, got {self.magnitude}")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")
        if self.tail_cutoff_policy is TailPolicy.HARD_CUTOFF:
            if self.r_max is None or not self.r_max > 0:
                raise DomainError("hard-cutoff policy requires r_max > 0")

    def loosened(self, rel_tol: float) -> 'QuadratureSpec':
        """Copy with a different relative tolerance."""
        return replace(self, rel_tol=rel_tol)

    def floored(self, magnitude: Optional[float]) -> 'QuadratureSpec':
        """Copy whose absolute floor follows a profile peak of ``magnitude``.

        Values far below rel_tol times the peak are treated as converged, so
        integrals over an underflowing tail do not chase roundoff.
        """
        if magnitude is None or not math.isfinite(magnitude):
            return self
        return replace(self, magnitude=max(self.magnitude, abs(float(magnitude))))

    @property
    def floor(self) -> float:
        return max(self.abs_tol, self.rel_tol * self.magnitude)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class EndpointSingularity:
    """Algebraic powers of the distance to the left and right endpoints."""
    exponent_left: float = 0.0
    exponent_right: float = 0.0

    def __post_init__(self):
        if not (self.exponent_left > -1.0 and self.exponent_right > -1.0):
            raise DomainError(
                f"endpoint exponents must exceed -1 for integrability, got "
                f"({self.exponent_left}, {self.exponent_right})")


NO_SINGULARITY = EndpointSingularity()


@dataclass(frozen=True)
class TailDecay:
    """Decay descriptor for integrands on [a, ∞).

    kind 'power' means the integrand behaves like r^{-exponent};
    'exponential' means Gaussian/exponential decay on length ``scale``;
    'vanishing' means the integrand is zero beyond ``scale``.
    """
    kind: str
    exponent: float = 0.0
    scale: float = 1.0

    @classmethod
    def power(cls, exponent: float, scale: float = 1.0) -> 'TailDecay':
        return cls('power', float(exponent), float(scale))

    @classmethod
    def exponential(cls, scale: float = 1.0) -> 'TailDecay':
        return cls('exponential', math.inf, float(scale))

    @classmethod
    def vanishing(cls, support_end: float) -> 'TailDecay':
        return cls('vanishing', math.inf, float(support_end))


def _t_max(min_exponent: float) -> float:
    # beyond this the weighted contributions fall below e^{-40}
    span = 40.0 / (math.pi * (1.0 + min_exponent))
    return min(math.asinh(span), _T_MAX_CAP)


def _level_nodes(level: int, t_max: float) -> np.ndarray:
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(-math.floor(t_max), math.floor(t_max) + 1, dtype=float)
    else:
        count = int(math.floor((t_max / h + 1.0) / 2.0))
        odd = 2.0 * np.arange(count, dtype=float) + 1.0
        k = np.concatenate([-odd[::-1], odd])
    return k * h


def _as_result(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _tanh_sinh(evaluate: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
               a: float, b: float, sing: EndpointSingularity,
               spec: QuadratureSpec,
               node_exponent: Optional[float] = None) -> Tuple[ArrayLike, ArrayLike]:
    """Core nested tanh-sinh rule; ``evaluate(x, d_left, d_right)``.

    ``node_exponent`` overrides the endpoint power used to size the node range.
    """
    width = b - a
    if node_exponent is None:
        node_exponent = min(sing.exponent_left, sing.exponent_right)
    t_max = _t_max(node_exponent)
    running = None
    running_abs = None
    previous = None
    estimate = None
    err = None
    for level in range(spec.max_refinements + 1):
        t = _level_nodes(level, t_max)
        u2 = math.pi * np.sinh(t)
        d_left = width * special.expit(u2)
        d_right = width * special.expit(-u2)
        keep = (d_left > _TINY) & (d_right > _TINY)
        t, d_left, d_right = t[keep], d_left[keep], d_right[keep]
        x = np.where(t <= 0.0, a + d_left, b - d_right)
        weights = math.pi * np.cosh(t) * d_left * d_right / width
        if sing.exponent_left:
            weights = weights * d_left ** sing.exponent_left
        if sing.exponent_right:
            weights = weights * d_right ** sing.exponent_right

        with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
            values = np.asarray(evaluate(x, d_left, d_right), dtype=float)
            contrib = values * weights
        if not np.all(np.isfinite(contrib)):
            raise QuadratureAccuracyError(
                f"non-finite integrand on [{a:g}, {b:g}] at refinement level {level}",
                estimate=None if estimate is None else _as_result(estimate))

        level_sum = contrib.sum(axis=-1)
        level_abs = np.abs(contrib).sum(axis=-1)
        running = level_sum if running is None else running + level_sum
        running_abs = level_abs if running_abs is None else running_abs + level_abs
        h = 2.0 ** -level
        estimate = h * running
        if previous is not None and level >= 3:
            err = np.abs(estimate - previous)
            tol = np.maximum(spec.floor, spec.rel_tol * h * running_abs)
            if np.all(err <= tol):
                logger.debug("tanh-sinh converged on [%g, %g] at level %d", a, b, level)
                return _as_result(estimate), _as_result(err)
        previous = estimate

    bound = float(np.max(err)) if err is not None else math.inf
    raise QuadratureAccuracyError(
        f"tanh-sinh did not converge on [{a:g}, {b:g}] within "
        f"{spec.max_refinements} refinements (error bound {bound:.3e})",
        estimate=_as_result(estimate), error_bound=bound)


def _trailing(value):
    return value[..., None] if np.ndim(value) else value


def integrate_singular(f: Integrand, a: float, b: float,
                       sing: EndpointSingularity = NO_SINGULARITY,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Integrate (x-a)^eL (b-x)^eR f(x) over [a, b].

    Endpoint powers below -3/4 are handled by subtracting the endpoint
    value(s) of ``f`` and adding the matching Beta integrals in closed form,
    so the remainder is only mildly singular.

    Args:
        f: Vectorized remaining factor of the integrand
        a: Left endpoint
        b: Right endpoint, b > a
        sing: Declared endpoint powers (eL, eR)
        spec: Tolerances

    Returns:
        The integral (float, or array when ``f`` returns leading axes)

    Raises:
        QuadratureAccuracyError: no convergence within spec.max_refinements
    """
    a, b = float(a), float(b)
    if not b > a:
        raise DomainError(f"integrate_singular needs b > a, got [{a}, {b}]")
    e_left, e_right = sing.exponent_left, sing.exponent_right
    strong_left = e_left < _STRONG_SINGULARITY
    strong_right = e_right < _STRONG_SINGULARITY
    if not (strong_left or strong_right):
        value, _ = _tanh_sinh(lambda x, dl, dr: f(x), a, b, sing, spec)
        return value

    width = b - a
    scale = width ** (1.0 + e_left + e_right)
    f_left = 0.0
    f_right = 0.0
    if strong_left:
        f_left = np.asarray(f(np.array([a + width * _SUBTRACTION_OFFSET])), dtype=float)[..., 0]
    if strong_right:
        f_right = np.asarray(f(np.array([b])), dtype=float)[..., 0]

    if strong_left and strong_right:
        # subtract the chord through both endpoint values
        closed = scale * (f_left * beta_function(1.0 + e_left, 2.0 + e_right)
                          + f_right * beta_function(2.0 + e_left, 1.0 + e_right))

        def remainder(x, dl, dr):
            chord = (_trailing(f_left) * dr + _trailing(f_right) * dl) / width
            return np.asarray(f(x), dtype=float) - chord
    else:
        end_value = f_left if strong_left else f_right
        closed = scale * end_value * beta_function(1.0 + e_left, 1.0 + e_right)

        def remainder(x, dl, dr):
            return np.asarray(f(x), dtype=float) - _trailing(end_value)

    node_exponent = min(e_left + 1.0 if strong_left else e_left,
                        e_right + 1.0 if strong_right else e_right)
    value, _ = _tanh_sinh(remainder, a, b, sing, spec, node_exponent=node_exponent)
    return _as_result(closed + np.asarray(value))


def integrate_tail(f: Integrand, a: float, tail: TailDecay,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Integrate f over [a, ∞) using its declared decay.

    Power tails r^{-β} are split at max(a, 10·scale); beyond the split the
    substitution r = R·s^{-1/(β-1)} integrates the pure power exactly and
    leaves a bounded integrand for the corrections.  Exponential tails use
    r = a + scale·w/(1-w).

    Raises:
        DivergenceError: the declared decay is not integrable
    """
    a = float(a)
    if a < 0:
        raise DomainError(f"integrate_tail needs a >= 0, got {a}")
    if spec.tail_cutoff_policy is TailPolicy.HARD_CUTOFF:
        if spec.r_max <= a:
            return 0.0
        return integrate_singular(f, a, spec.r_max, NO_SINGULARITY, spec)

    if tail.kind == 'vanishing':
        if tail.scale <= a:
            return 0.0
        return integrate_singular(f, a, tail.scale, NO_SINGULARITY, spec)

    if tail.kind == 'power':
        beta = tail.exponent
        if not beta > 1.0:
            raise DivergenceError(
                f"integrand decays like r^(-{beta:g}); the integral over [{a:g}, inf) diverges")
        split = max(a, 10.0 * tail.scale)
        head = 0.0
        if split > a:
            head = integrate_singular(f, a, split, NO_SINGULARITY, spec)
        gamma = 1.0 / (beta - 1.0)

        def mapped(s):
            r = split * s ** (-gamma)
            with np.errstate(over='ignore', invalid='ignore'):
                value = np.asarray(f(r), dtype=float) * r ** beta
            return np.where(np.isfinite(value), value, 0.0)

        rest = integrate_singular(mapped, 0.0, 1.0, NO_SINGULARITY, spec)
        return head + gamma * split ** (1.0 - beta) * rest

    if tail.kind == 'exponential':
        length = tail.scale

        def mapped_exp(w, d_left, d_right):
            with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
                fr = np.asarray(f(a + length * d_left / d_right), dtype=float)
                value = fr * (length / d_right / d_right)
            return np.where(fr == 0.0, 0.0, value)

        value, _ = _tanh_sinh(mapped_exp, 0.0, 1.0, NO_SINGULARITY, spec)
        return value

    raise DomainError(f"unknown tail kind {tail.kind!r}")
