"""Radial profiles f₀ on the positive half-line and fractional orders.

A profile is an immutable value: a kind, its parameters, and the asymptotic
exponents that decide every existence question (f₀(t) ~ t^head near 0,
f₀(t) ~ t^tail at infinity; tail = -inf means faster than any power).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline, PchipInterpolator

from numerics.errors import ConfigError, DomainError
from numerics.parallel import map_chunks
from numerics.quadrature import TailDecay

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

NEG_INF = float('-inf')
# composite evaluators are fed at most this many points at once
_EVAL_CHUNK = 2048
_INTEGER_TOL = 1e-12
# local log-slope beyond which a tabulated tail counts as super-polynomial
STEEP_SLOPE = 20.0


class ProfileKind(Enum):
    POWER_LAW = 'power-law'
    GENERALIZED_CAUCHY = 'generalized-cauchy'
    GAUSSIAN = 'gaussian'
    LOG_TEMPERED_POWER = 'log-tempered-power'
    GRID = 'grid'
    COMPOSITE = 'composite'
    ZERO = 'zero'


@dataclass(frozen=True)
class FracOrder:
    """Positive fractional order α = m + α₀ with m = [α] and 0 <= α₀ < 1."""
    alpha: float
    m: int = field(init=False)
    alpha0: float = field(init=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not alpha > 0 or not math.isfinite(alpha):
            raise DomainError(f"fractional order must be positive and finite, got {self.alpha}")
        nearest = round(alpha)
        if abs(alpha - nearest) < _INTEGER_TOL:
            alpha, m, alpha0 = float(nearest), int(nearest), 0.0
        else:
            m = int(math.floor(alpha))
            alpha0 = alpha - m
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'm', m)
        object.__setattr__(self, 'alpha0', alpha0)

    @classmethod
    def of(cls, value: Union['FracOrder', float]) -> 'FracOrder':
        return value if isinstance(value, FracOrder) else cls(float(value))

    @property
    def is_integer(self) -> bool:
        return self.alpha0 == 0.0

    @property
    def is_half_odd(self) -> bool:
        return abs(self.alpha0 - 0.5) < _INTEGER_TOL

    def __add__(self, other: Union['FracOrder', float]) -> 'FracOrder':
        return FracOrder(self.alpha + FracOrder.of(other).alpha)


@dataclass(frozen=True)
class GridSpec:
    """Log-uniform radius grid."""
    t_min: float = 1e-2
    t_max: float = 1e2
    points: int = 512

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise ConfigError(f"grid needs 0 < t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.points < 4:
            raise ConfigError(f"grid needs at least 4 points, got {self.points}")

    def radii(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class RadialProfile:
    """A function f₀ on (0, ∞) with declared asymptotic exponents.

    Use the classmethod constructors; evaluation is ``profile(t)`` and is
    vectorized over numpy arrays.
    """
    kind: ProfileKind
    params: Tuple[float, ...] = ()
    amplitude: float = 1.0
    head_exponent: float = 0.0
    tail_exponent: float = NEG_INF
    scale: float = 1.0
    accuracy: float = 1e-15
    label: str = ''
    radii: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    values: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    interpolation: str = 'pchip'
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False,
                                                                   repr=False)
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)
    breakpoints: Tuple[float, ...] = ()
    # f(ct) = c^{head} f(t) exactly; then head == tail
    homogeneous: bool = False
    _interpolant: Any = field(default=None, compare=False, repr=False)

    # constructors

    @classmethod
    def power_law(cls, lam: float, amplitude: float = 1.0) -> 'RadialProfile':
        """t^{-λ}."""
        lam = float(lam)
        return cls(ProfileKind.POWER_LAW, (lam,), amplitude, -lam, -lam,
                   label=f'power-law({lam:g})', homogeneous=True)

    @classmethod
    def constant(cls, value: float = 1.0) -> 'RadialProfile':
        return cls.power_law(0.0, amplitude=value)

    @classmethod
    def generalized_cauchy(cls, beta: float, amplitude: float = 1.0) -> 'RadialProfile':
        """(1+t²)^{-β/2}."""
        beta = float(beta)
        return cls(ProfileKind.GENERALIZED_CAUCHY, (beta,), amplitude, 0.0, -beta,
                   label=f'generalized-cauchy({beta:g})')

    @classmethod
    def gaussian(cls, scale: float = 1.0, amplitude: float = 1.0) -> 'RadialProfile':
        """exp(-(t/scale)²)."""
        if not scale > 0:
            raise DomainError(f"gaussian scale must be positive, got {scale}")
        return cls(ProfileKind.GAUSSIAN, (float(scale),), amplitude, 0.0, NEG_INF,
                   scale=float(scale), label=f'gaussian({scale:g})')

    @classmethod
    def log_tempered_power(cls, exponent: float, amplitude: float = 1.0) -> 'RadialProfile':
        """(2+t)^{e} / log(2+t)."""
        exponent = float(exponent)
        return cls(ProfileKind.LOG_TEMPERED_POWER, (exponent,), amplitude, 0.0, exponent,
                   label=f'log-tempered-power({exponent:g})')

    @classmethod
    def zero(cls) -> 'RadialProfile':
        return cls(ProfileKind.ZERO, (), 0.0, 0.0, NEG_INF, label='zero')

    @classmethod
    def from_grid(cls, radii: Sequence[float], values: Sequence[float],
                  head_exponent: float, tail_exponent: float,
                  interpolation: str = 'pchip', accuracy: float = 1e-9,
                  label: str = 'grid', metadata: Optional[Mapping[str, Any]] = None,
                  scale: float = 1.0) -> 'RadialProfile':
        """Interpolated profile with power-law extrapolation outside the grid.

        Interpolation runs on log-radius; ``interpolation`` is 'pchip'
        (monotone cubic) or 'spline' (not-a-knot cubic, used for smooth
        tabulated transform outputs).  A tail exponent of -inf makes the
        profile vanish beyond the last radius.
        """
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.shape != values.shape or radii.size < 2:
            raise DomainError("grid radii and values must be 1-D arrays of equal length >= 2")
        if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
            raise DomainError("grid radii must be positive and strictly increasing")
        if not math.isfinite(head_exponent):
            raise DomainError("grid head exponent must be finite")
        if math.isnan(tail_exponent) or tail_exponent == math.inf:
            raise DomainError("grid tail exponent must be finite or -inf")
        if not np.all(np.isfinite(values)):
            raise DomainError("grid values must be finite")
        if interpolation == 'pchip':
            interpolant = PchipInterpolator(np.log(radii), values, extrapolate=False)
            breakpoints = (float(radii[0]), float(radii[-1]))
        elif interpolation == 'spline':
            # end slopes in log r match the power-law extrapolation, so the joins are C1
            tail_slope = 0.0 if tail_exponent == NEG_INF else tail_exponent * values[-1]
            interpolant = CubicSpline(np.log(radii), values, extrapolate=False,
                                      bc_type=((1, head_exponent * values[0]), (1, tail_slope)))
            breakpoints = ()
        else:
            raise ConfigError(f"unknown interpolation {interpolation!r}")
        return cls(ProfileKind.GRID, (), 1.0, float(head_exponent), float(tail_exponent),
                   scale=scale, accuracy=accuracy, label=label, radii=radii, values=values,
                   interpolation=interpolation, metadata=dict(metadata or {}),
                   breakpoints=breakpoints,
                   _interpolant=interpolant)

    @classmethod
    def composite(cls, evaluator: Callable[[np.ndarray], np.ndarray], head_exponent: float,
                  tail_exponent: float, accuracy: float, label: str,
                  scale: float = 1.0, breakpoints: Tuple[float, ...] = (),
                  metadata: Optional[Mapping[str, Any]] = None,
                  homogeneous: bool = False) -> 'RadialProfile':
        """Lazily evaluated profile (typically a transform output).

        ``breakpoints`` lists radii where the evaluator is only piecewise
        smooth; integral operators split their ranges there.  ``homogeneous``
        marks outputs of scale-free inputs (exact power laws).
        """
        if homogeneous and head_exponent != tail_exponent:
            raise DomainError("a homogeneous profile has equal head and tail exponents")
        return cls(ProfileKind.COMPOSITE, (), 1.0, float(head_exponent), float(tail_exponent),
                   scale=scale, accuracy=accuracy, label=label, evaluator=evaluator,
                   breakpoints=tuple(breakpoints), metadata=dict(metadata or {}),
                   homogeneous=homogeneous)

    # evaluation

    def __call__(self, t: ArrayLike) -> ArrayLike:
        t_arr = np.asarray(t, dtype=float)
        flat = t_arr.ravel()
        out = self.amplitude * self._evaluate(flat)
        out = out.reshape(t_arr.shape)
        return float(out) if out.ndim == 0 else out

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        kind = self.kind
        if kind is ProfileKind.ZERO:
            return np.zeros_like(t)
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            if kind is ProfileKind.POWER_LAW:
                return t ** (-self.params[0])
            if kind is ProfileKind.GENERALIZED_CAUCHY:
                return (1.0 + t * t) ** (-self.params[0] / 2.0)
            if kind is ProfileKind.GAUSSIAN:
                return np.exp(-(t / self.params[0]) ** 2)
            if kind is ProfileKind.LOG_TEMPERED_POWER:
                return (2.0 + t) ** self.params[0] / np.log(2.0 + t)
        if kind is ProfileKind.GRID:
            return self._evaluate_grid(t)
        if kind is ProfileKind.COMPOSITE:
            if t.size <= _EVAL_CHUNK:
                return np.asarray(self.evaluator(t), dtype=float).reshape(t.shape)
            pieces = [np.asarray(self.evaluator(t[i:i + _EVAL_CHUNK]), dtype=float).ravel()
                      for i in range(0, t.size, _EVAL_CHUNK)]
            return np.concatenate(pieces)
        raise DomainError(f"cannot evaluate profile kind {kind}")

    def _evaluate_grid(self, t: np.ndarray) -> np.ndarray:
        r0, r1 = self.radii[0], self.radii[-1]
        out = np.empty_like(t)
        inside = (t >= r0) & (t <= r1)
        out[inside] = self._interpolant(np.log(t[inside]))
        below = t < r0
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            out[below] = self.values[0] * (t[below] / r0) ** self.head_exponent
            above = t > r1
            if self.tail_exponent == NEG_INF:
                out[above] = 0.0
            else:
                out[above] = self.values[-1] * (t[above] / r1) ** self.tail_exponent
        return out

    # derived profiles

    def scaled(self, factor: float) -> 'RadialProfile':
        return replace(self, amplitude=self.amplitude * float(factor))

    def times_power(self, power: float) -> 'RadialProfile':
        """r^{power} · f(r)."""
        if power == 0:
            return self
        if self.kind is ProfileKind.ZERO:
            return self
        if self.kind is ProfileKind.POWER_LAW:
            return RadialProfile.power_law(self.params[0] - power, self.amplitude)
        base = self
        tail = NEG_INF if self.tail_exponent == NEG_INF else self.tail_exponent + power
        peak = self.peak
        return RadialProfile.composite(
            lambda r: r ** power * base(r), self.head_exponent + power, tail,
            accuracy=self.accuracy, label=f'r^{power:g}*{self.label}', scale=self.scale,
            breakpoints=self.breakpoints, homogeneous=self.homogeneous,
            metadata=None if peak is None else {'peak': peak})

    # asymptotic bookkeeping

    @property
    def is_zero(self) -> bool:
        return self.kind is ProfileKind.ZERO or self.amplitude == 0.0

    @property
    def is_scale_free(self) -> bool:
        return self.homogeneous

    @property
    def is_closed_form(self) -> bool:
        return self.kind not in (ProfileKind.GRID, ProfileKind.COMPOSITE)

    @property
    def decays_exponentially(self) -> bool:
        return self.tail_exponent == NEG_INF

    @property
    def peak(self) -> Optional[float]:
        """Size of a bounded, exponentially decaying profile; None otherwise.

        Quadratures over such a profile stop refining once the error is a
        rel_tol fraction of this value.
        """
        if self.is_zero or not self.decays_exponentially:
            return None
        if self.kind is ProfileKind.GAUSSIAN:
            return abs(self.amplitude)
        if self.kind is ProfileKind.GRID:
            values = self.values
            if self.head_exponent < 0:
                # a singular head says nothing about the size of the tail
                values = values[self.radii >= min(self.scale, self.radii[-1])]
            return abs(self.amplitude) * float(np.max(np.abs(values)))
        stored = self.metadata.get('peak')
        return None if stored is None else abs(self.amplitude) * float(stored)

    def decay(self, weight_power: float = 0.0) -> TailDecay:
        """Decay descriptor of r ↦ f(r)·r^{weight_power}."""
        if self.is_zero:
            return TailDecay.vanishing(0.0)
        if self.decays_exponentially:
            if self.kind is ProfileKind.GRID:
                return TailDecay.vanishing(float(self.radii[-1]))
            return TailDecay.exponential(self.scale)
        return TailDecay.power(-(self.tail_exponent + weight_power), self.scale)

    def regular_part(self) -> Callable[[np.ndarray], np.ndarray]:
        """r ↦ f(r)·r^{-head}, bounded near the origin."""
        head = self.head_exponent
        if head == 0:
            return self
        return lambda r: self(r) * r ** (-head)


def ek_asymptotics_plus(head: float, tail: float, alpha: float,
                        homogeneous: bool = False) -> Tuple[float, float]:
    """Exponents of I^α_{+,2} f given those of f."""
    if homogeneous:
        return head + 2.0 * alpha, tail + 2.0 * alpha
    new_tail = 2.0 * alpha - 2.0 if tail == NEG_INF else max(tail, -2.0) + 2.0 * alpha
    return head + 2.0 * alpha, new_tail


def ek_asymptotics_minus(head: float, tail: float, alpha: float,
                         homogeneous: bool = False) -> Tuple[float, float]:
    """Exponents of I^α_{-,2} f given those of f.

    When head + 2α = 0 the head is log(1/t) rather than a power; the
    returned head exponent 0 then hides a logarithmic factor, see
    ek_minus_head_is_log.
    """
    if homogeneous:
        return head + 2.0 * alpha, tail + 2.0 * alpha
    new_tail = NEG_INF if tail == NEG_INF else tail + 2.0 * alpha
    return min(0.0, head + 2.0 * alpha), new_tail


def ek_minus_head_is_log(head: float, alpha: float, homogeneous: bool = False) -> bool:
    """True when I^α_{-,2} f grows like log(1/t) at the origin."""
    return not homogeneous and abs(head + 2.0 * alpha) < _INTEGER_TOL


def riesz_asymptotics(head: float, tail: float, alpha: float, d: int,
                      homogeneous: bool = False) -> Tuple[float, float]:
    """Exponents of the d-dimensional Riesz potential of order α."""
    if homogeneous:
        return head + alpha, tail + alpha
    new_tail = alpha - d if tail == NEG_INF else max(tail, -float(d)) + alpha
    return min(0.0, head + alpha), new_tail


def estimate_exponents(radii: np.ndarray, values: np.ndarray,
                       span: int = 4, floor: float = 1e-250) -> Tuple[float, float]:
    """Fit end-point log-slopes of tabulated values.

    Returns (head, tail); the tail is -inf when the last value falls below
    ``floor`` times the peak or the tail steepens faster than any moderate
    power.
    """
    radii = np.asarray(radii, dtype=float)
    magnitude = np.abs(np.asarray(values, dtype=float))
    peak = float(magnitude.max()) if magnitude.size else 0.0
    if peak == 0.0:
        return 0.0, NEG_INF

    def slope(r, v):
        keep = v > 0
        if keep.sum() < 2:
            return None
        return float(np.polyfit(np.log(r[keep]), np.log(v[keep]), 1)[0])

    head = slope(radii[:span], magnitude[:span])
    tail = None
    if magnitude[-1] > floor * peak:
        tail = slope(radii[-span:], magnitude[-span:])
    if tail is None or tail < -50.0:
        tail = NEG_INF
    head = round(head, 6) if head is not None else 0.0
    return head, (tail if tail == NEG_INF else round(tail, 6))


def roundoff_extent(radii: np.ndarray, values: np.ndarray,
                    steep: float = STEEP_SLOPE) -> int:
    """Number of leading grid values that are free of roundoff.

    Once the local log-slope falls below -steep the values must keep
    shrinking without changing sign; the first one that does not starts the
    noise.  Returns len(values) when the values never decay that fast.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    count = values.size
    if count < 3:
        return count
    magnitude = np.abs(values)
    with np.errstate(divide='ignore', invalid='ignore'):
        local = np.diff(np.log(magnitude)) / np.diff(np.log(radii))
    steep_at = np.flatnonzero(local < -steep)
    if steep_at.size == 0:
        return count
    for i in range(int(steep_at[0]), count - 1):
        if (magnitude[i + 1] == 0.0 or magnitude[i + 1] >= magnitude[i]
                or np.sign(values[i + 1]) != np.sign(values[i])):
            return max(i + 1, 2)
    return count


def tabulate(profile: RadialProfile, grid: Union[GridSpec, Sequence[float]],
             head_exponent: Optional[float] = None, tail_exponent: Optional[float] = None,
             label: Optional[str] = None, accuracy: float = 1e-9,
             workers: Optional[int] = None) -> RadialProfile:
    """Evaluate a (usually expensive) profile once on a grid and interpolate.

    The declared exponents of ``profile`` are kept unless overridden.
    """
    radii = grid.radii() if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    values = map_chunks(profile, radii, workers)
    head = profile.head_exponent if head_exponent is None else head_exponent
    tail = profile.tail_exponent if tail_exponent is None else tail_exponent
    logger.debug("tabulated %s on %d radii", profile.label, radii.size)
    return RadialProfile.from_grid(radii, values, head, tail, interpolation='spline',
                                   accuracy=max(accuracy, profile.accuracy),
                                   label=label or f'tab[{profile.label}]', scale=profile.scale)


class NodeCache:
    """Memo of a profile's values keyed by radius, for one composed evaluation.

    Create one per outer call; instances are not shared across threads.
    """

    def __init__(self, profile: RadialProfile):
        self.profile = profile
        self._values: Dict[float, float] = {}
        self.hits = 0

    def __call__(self, r: ArrayLike) -> np.ndarray:
        r_arr = np.asarray(r, dtype=float)
        flat = r_arr.ravel()
        out = np.empty_like(flat)
        missing = []
        for i, key in enumerate(flat.tolist()):
            cached = self._values.get(key)
            if cached is None:
                missing.append(i)
            else:
                out[i] = cached
        self.hits += flat.size - len(missing)
        if missing:
            index = np.array(missing)
            fresh = np.asarray(self.profile(flat[index]), dtype=float).ravel()
            out[index] = fresh
            self._values.update(zip(flat[index].tolist(), fresh.tolist()))
        return out.reshape(r_arr.shape)

    def __len__(self) -> int:
        return len(self._values)

    def as_profile(self) -> RadialProfile:
        p = self.profile
        peak = p.peak
        return RadialProfile.composite(self, p.head_exponent, p.tail_exponent, p.accuracy,
                                       p.label, scale=p.scale, breakpoints=p.breakpoints,
                                       metadata=None if peak is None else {'peak': peak},
                                       homogeneous=p.homogeneous)


def write_grid_csv(profile: RadialProfile, path: str,
                   extra_header: Optional[Dict[str, Any]] = None) -> None:
    """Write a grid profile in the CSV grid format."""
    if profile.kind is not ProfileKind.GRID:
        raise DomainError("only grid profiles can be written; tabulate() first")
    header = {'kind': 'grid', 'label': profile.label,
              'head_exponent': repr(profile.head_exponent),
              'tail_exponent': repr(profile.tail_exponent)}
    header.update(extra_header or {})
    frame = pd.DataFrame({'radius': profile.radii, 'value': profile.values * profile.amplitude})
    with open(path, 'w', newline='') as handle:
        for key, value in header.items():
            handle.write(f"# {key}={value}\n")
        frame.to_csv(handle, index=False, float_format='%.17g')


def read_grid_csv(path: str, interpolation: str = 'pchip') -> RadialProfile:
    """Read a CSV grid profile; exponents come from the header lines."""
    meta: Dict[str, str] = {}
    with open(path, 'r') as handle:
        for line in handle:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].strip().partition('=')
            meta[key.strip()] = value.strip()
    missing = [key for key in ('head_exponent', 'tail_exponent') if key not in meta]
    if missing:
        raise ConfigError(f"grid file {path} lacks header field(s): {', '.join(missing)}")
    frame = pd.read_csv(path, comment='#')
    if list(frame.columns[:2]) != ['radius', 'value']:
        raise ConfigError(f"grid file {path} must have columns radius,value")
    return RadialProfile.from_grid(frame['radius'].to_numpy(), frame['value'].to_numpy(),
                                   float(meta['head_exponent']), float(meta['tail_exponent']),
                                   interpolation=interpolation,
                                   label=meta.get('label', path), metadata={'source': path})
