"""Erdélyi–Kober fractional integrals and derivatives in the variable t².

    (I^α_{+,2} f)(t) = 2/Γ(α) ∫_0^t (t²-r²)^{α-1} f(r) r dr
    (I^α_{-,2} f)(t) = 2/Γ(α) ∫_t^∞ (r²-t²)^{α-1} f(r) r dr

With x = t² both are Riemann–Liouville integrals in x, so D = (1/2t) d/dt is
their integer-order inverse.  Existence is decided from the declared
exponents of the profile before any quadrature runs.
"""

import logging
import math
from typing import Union

import numpy as np

from fractional.profiles import (FracOrder, RadialProfile, ek_asymptotics_minus,
                                 ek_asymptotics_plus, ek_minus_head_is_log)
from numerics.differentiation import apply_D
from numerics.errors import DivergenceError, DomainError
from numerics.quadrature import (DEFAULT_SPEC, EndpointSingularity, QuadratureSpec,
                                 TailDecay, integrate_singular, integrate_tail)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
OrderLike = Union[FracOrder, float]

# the bounded factor r^{-h} f(r) is sampled no closer to the origin than this
_SMALLEST_Y = 1e-40
_SMALLEST_R = 1e-20


def _as_points(t: ArrayLike) -> np.ndarray:
    points = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    if np.any(~(points > 0)):
        raise DomainError("Erdélyi–Kober operators are evaluated at t > 0 only")
    return points


def _shaped(values: np.ndarray, t: ArrayLike) -> ArrayLike:
    values = np.asarray(values, dtype=float)
    return float(values[0]) if np.ndim(t) == 0 else values.reshape(np.shape(t))


def _spec_for(f: RadialProfile, spec: QuadratureSpec) -> QuadratureSpec:
    spec = spec.floored(f.peak)
    # tabulated or composed inputs cannot be integrated below their own accuracy
    if f.accuracy > spec.rel_tol:
        return spec.loosened(min(10.0 * f.accuracy, 1e-4))
    return spec


def check_plus_admissible(f: RadialProfile, alpha: float) -> None:
    if f.is_zero:
        return
    if not f.head_exponent > -2.0:
        raise DivergenceError(
            f"I^{alpha:g}_+ of {f.label} diverges: t^{f.head_exponent:g} near 0 "
            f"needs an exponent above -2")


def check_minus_admissible(f: RadialProfile, alpha: float) -> None:
    if f.is_zero or f.decays_exponentially:
        return
    if not f.tail_exponent < -2.0 * alpha:
        raise DivergenceError(
            f"I^{alpha:g}_- of {f.label} diverges: tail t^{f.tail_exponent:g} "
            f"needs an exponent below {-2.0 * alpha:g}")


# integrals

def _ek_plus_vector(f: RadialProfile, alpha: float, t: np.ndarray,
                    spec: QuadratureSpec) -> np.ndarray:
    # r = t·√y:  t^{2α+h}/Γ(α) ∫_0^1 y^{h/2} (1-y)^{α-1} g(t√y) dy,  g = f·r^{-h}
    head = f.head_exponent
    regular = f.regular_part()
    sing = EndpointSingularity(head / 2.0, alpha - 1.0)

    def integrand(y):
        return regular(t[:, None] * np.sqrt(np.maximum(y, _SMALLEST_Y))[None, :])

    integral = np.atleast_1d(integrate_singular(integrand, 0.0, 1.0, sing, spec))
    return integral * t ** (2.0 * alpha + head) / math.gamma(alpha)


def _ek_plus_split(f: RadialProfile, alpha: float, t: float,
                   spec: QuadratureSpec) -> float:
    head = f.head_exponent
    regular = f.regular_part()
    edges = [0.0] + sorted(b for b in f.breakpoints if 0.0 < b < t) + [t]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        first, last = a == 0.0, b == t

        def integrand(r, first=first, last=last):
            value = regular(np.maximum(r, t * _SMALLEST_R)) if first else f(r) * r
            value = value * (t + r) ** (alpha - 1.0)
            if not last:
                value = value * (t - r) ** (alpha - 1.0)
            return value

        sing = EndpointSingularity(head + 1.0 if first else 0.0, alpha - 1.0 if last else 0.0)
        total += integrate_singular(integrand, a, b, sing, spec)
    return 2.0 * total / math.gamma(alpha)


def _ek_minus_vector(f: RadialProfile, alpha: float, t: np.ndarray,
                     spec: QuadratureSpec) -> np.ndarray:
    # u = r² - t² = W·y:  W^α/Γ(α) ∫_0^∞ y^{α-1} f(√(t² + W y)) dy
    x = t * t
    width = x if f.is_scale_free else np.maximum(x, f.scale ** 2)

    def profile_at(y):
        return f(np.sqrt(x[:, None] + width[:, None] * y[None, :]))

    near = integrate_singular(profile_at, 0.0, 1.0, EndpointSingularity(alpha - 1.0, 0.0), spec)
    if f.decays_exponentially:
        length = float(np.clip(np.min(f.scale ** 2 / width), 1e-2, 1.0))
        decay = TailDecay.exponential(length)
    else:
        decay = TailDecay.power(1.0 - alpha - f.tail_exponent / 2.0)
    far = integrate_tail(lambda z: z ** (alpha - 1.0) * profile_at(z), 1.0, decay, spec)
    return width ** alpha * (np.atleast_1d(near) + np.atleast_1d(far)) / math.gamma(alpha)


def _ek_minus_split(f: RadialProfile, alpha: float, t: float,
                    spec: QuadratureSpec) -> float:
    edges = [t] + sorted(b for b in f.breakpoints if b > t)
    if len(edges) == 1:
        edges.append(max(2.0 * t, t + f.scale))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        first = a == t

        def integrand(r, first=first):
            value = f(r) * r * (r + t) ** (alpha - 1.0)
            if not first:
                value = value * (r - t) ** (alpha - 1.0)
            return value

        sing = EndpointSingularity(alpha - 1.0 if first else 0.0, 0.0)
        total += integrate_singular(integrand, a, b, sing, spec)
    total += integrate_tail(lambda r: f(r) * r * (r * r - t * t) ** (alpha - 1.0),
                            edges[-1], f.decay(2.0 * alpha - 1.0), spec)
    return 2.0 * total / math.gamma(alpha)


def ek_plus(f: RadialProfile, order: OrderLike, t: ArrayLike,
            spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Left-sided Erdélyi–Kober integral I^α_{+,2} f at t (scalar or array).

    Raises:
        DivergenceError: the head exponent of ``f`` is <= -2
    """
    order = FracOrder.of(order)
    points = _as_points(t)
    if f.is_zero:
        return _shaped(np.zeros_like(points), t)
    check_plus_admissible(f, order.alpha)
    spec = _spec_for(f, spec)
    if f.breakpoints:
        values = np.array([_ek_plus_split(f, order.alpha, p, spec) for p in points])
    else:
        values = _ek_plus_vector(f, order.alpha, points, spec)
    return _shaped(values, t)


def ek_minus(f: RadialProfile, order: OrderLike, t: ArrayLike,
             spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Right-sided Erdélyi–Kober integral I^α_{-,2} f at t (scalar or array).

    Raises:
        DivergenceError: the declared tail of ``f`` does not satisfy
            ∫^∞ |f(r)| r^{2α-1} dr < ∞
    """
    order = FracOrder.of(order)
    points = _as_points(t)
    if f.is_zero:
        return _shaped(np.zeros_like(points), t)
    check_minus_admissible(f, order.alpha)
    spec = _spec_for(f, spec)
    if f.breakpoints:
        values = np.array([_ek_minus_split(f, order.alpha, p, spec) for p in points])
    else:
        values = _ek_minus_vector(f, order.alpha, points, spec)
    return _shaped(values, t)


def ek_minus_at_zero(f: RadialProfile, order: OrderLike,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(I^α_{-,2} f)(0) = 2/Γ(α) ∫_0^∞ r^{2α-1} f(r) dr.

    Raises:
        DivergenceError: the head exponent is <= -2α or the tail is too slow
    """
    order = FracOrder.of(order)
    alpha = order.alpha
    if f.is_zero:
        return 0.0
    check_minus_admissible(f, alpha)
    head = f.head_exponent
    if not head + 2.0 * alpha > 0.0:
        raise DivergenceError(
            f"I^{alpha:g}_- of {f.label} is infinite at 0: t^{head:g} needs an exponent "
            f"above {-2.0 * alpha:g}")
    spec = _spec_for(f, spec)
    regular = f.regular_part()
    edges = sorted({f.scale, *(b for b in f.breakpoints if b > 0.0)})
    edges = [0.0] + edges
    total = integrate_singular(
        lambda r: regular(np.maximum(r, edges[1] * _SMALLEST_R)), 0.0, edges[1],
        EndpointSingularity(head + 2.0 * alpha - 1.0, 0.0), spec)
    for a, b in zip(edges[1:-1], edges[2:]):
        total += integrate_singular(lambda r: f(r) * r ** (2.0 * alpha - 1.0), a, b,
                                    spec=spec)
    total += integrate_tail(lambda r: f(r) * r ** (2.0 * alpha - 1.0), edges[-1],
                            f.decay(2.0 * alpha - 1.0), spec)
    return 2.0 * float(total) / math.gamma(alpha)


def ek_plus_profile(f: RadialProfile, order: OrderLike,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """I^α_{+,2} f as a lazily evaluated profile with propagated exponents."""
    order = FracOrder.of(order)
    if f.is_zero:
        return RadialProfile.zero()
    check_plus_admissible(f, order.alpha)
    head, tail = ek_asymptotics_plus(f.head_exponent, f.tail_exponent, order.alpha,
                                     f.homogeneous)
    return RadialProfile.composite(lambda r: ek_plus(f, order, r, spec), head, tail,
                                   accuracy=max(f.accuracy, spec.rel_tol),
                                   label=f'I+^{order.alpha:g}[{f.label}]', scale=f.scale,
                                   homogeneous=f.homogeneous)


def ek_minus_profile(f: RadialProfile, order: OrderLike,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """I^α_{-,2} f as a lazily evaluated profile with propagated exponents."""
    order = FracOrder.of(order)
    if f.is_zero:
        return RadialProfile.zero()
    check_minus_admissible(f, order.alpha)
    head, tail = ek_asymptotics_minus(f.head_exponent, f.tail_exponent, order.alpha,
                                      f.homogeneous)
    metadata = {}
    if ek_minus_head_is_log(f.head_exponent, order.alpha, f.homogeneous):
        logger.debug("I-^%g[%s] has a logarithmic head", order.alpha, f.label)
        metadata['log_head'] = True
    if f.peak is not None:
        metadata['peak'] = f.peak
    return RadialProfile.composite(lambda r: ek_minus(f, order, r, spec), head, tail,
                                   accuracy=max(f.accuracy, spec.rel_tol),
                                   label=f'I-^{order.alpha:g}[{f.label}]', scale=f.scale,
                                   metadata=metadata, homogeneous=f.homogeneous)


# derivatives

def _derivative_accuracy(phi: RadialProfile, spec: QuadratureSpec) -> float:
    return max(phi.accuracy, spec.rel_tol)


def derivative_branch(order: OrderLike) -> str:
    """Which representation ek_derivative_minus uses for this order."""
    order = FracOrder.of(order)
    if order.is_integer:
        return 'integer'
    if order.is_half_odd:
        return 'half-odd'
    return 'fractional'


def ek_derivative_plus(phi: RadialProfile, order: OrderLike, t: ArrayLike,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Left inverse of ek_plus: D^m φ, or D^{m+1} I^{1-α₀}_{+,2} φ."""
    order = FracOrder.of(order)
    points = _as_points(t)
    if phi.is_zero:
        return _shaped(np.zeros_like(points), t)
    accuracy = _derivative_accuracy(phi, spec)
    if order.is_integer:
        values = apply_D(phi, points, order.m, sign=1, accuracy=accuracy)
    else:
        smoothed = ek_plus_profile(phi, 1.0 - order.alpha0, spec)
        values = apply_D(smoothed, points, order.m + 1, sign=1, accuracy=accuracy)
    return _shaped(values, t)


def ek_derivative_minus(phi: RadialProfile, order: OrderLike, t: ArrayLike,
                        spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Left inverse of ek_minus.

    integer α = m:       (-D)^m φ
    α = k/2, k odd:      t (-D)^{(k+1)/2} t^k I^{1/2}_{-,2} t^{-k-1} φ
    otherwise:           t^{2(1-α₀)} (-D)^{m+1} t^{2α} I^{1-α₀}_{-,2} t^{-2m-2} φ
    """
    order = FracOrder.of(order)
    points = _as_points(t)
    if phi.is_zero:
        return _shaped(np.zeros_like(points), t)
    accuracy = _derivative_accuracy(phi, spec)
    branch = derivative_branch(order)
    if branch == 'integer':
        values = apply_D(phi, points, order.m, sign=-1, accuracy=accuracy)
    elif branch == 'half-odd':
        k = int(round(2.0 * order.alpha))
        inner = ek_minus_profile(phi.times_power(-(k + 1.0)), 0.5, spec).times_power(float(k))
        values = points * apply_D(inner, points, (k + 1) // 2, sign=-1, accuracy=accuracy)
    else:
        inner = ek_minus_profile(phi.times_power(-2.0 * order.m - 2.0), 1.0 - order.alpha0, spec)
        inner = inner.times_power(2.0 * order.alpha)
        values = (points ** (2.0 * (1.0 - order.alpha0))
                  * apply_D(inner, points, order.m + 1, sign=-1, accuracy=accuracy))
    return _shaped(values, t)


def _operators(sign: Union[int, str]):
    if sign in (1, '+', 'plus'):
        return ek_plus, ek_plus_profile, ek_derivative_plus
    if sign in (-1, '-', 'minus'):
        return ek_minus, ek_minus_profile, ek_derivative_minus
    raise DomainError(f"sign must be '+' or '-', got {sign!r}")


def semigroup_check(f: RadialProfile, a1: OrderLike, a2: OrderLike, sign: Union[int, str],
                    t_grid, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Max relative deviation of I^{a1} I^{a2} f from I^{a1+a2} f over ``t_grid``."""
    operator, as_profile, _ = _operators(sign)
    a1, a2 = FracOrder.of(a1), FracOrder.of(a2)
    t = _as_points(t_grid)
    inner = as_profile(f, a2, spec)
    composed = np.atleast_1d(operator(inner, a1, t, spec))
    direct = np.atleast_1d(operator(f, a1 + a2, t, spec))
    deviation = np.abs(composed - direct) / (np.abs(direct) + spec.abs_tol)
    logger.debug("semigroup %s %g+%g on %s: max deviation %.3e", sign, a1.alpha, a2.alpha,
                 f.label, float(deviation.max()))
    return float(deviation.max())


def left_inverse_deviation(f: RadialProfile, order: OrderLike, sign: Union[int, str],
                           t_grid, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Max relative deviation of D^α I^α f from f over ``t_grid``."""
    _, as_profile, derivative = _operators(sign)
    t = _as_points(t_grid)
    recovered = np.atleast_1d(derivative(as_profile(f, order, spec), order, t, spec))
    expected = np.atleast_1d(f(t))
    return float(np.max(np.abs(recovered - expected) / (np.abs(expected) + spec.abs_tol)))
