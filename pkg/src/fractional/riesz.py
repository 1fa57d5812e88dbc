"""Riesz potentials of radial functions.

Two independent evaluations of (I^α_d f)(r) for x ↦ f(|x|) on R^d:

* ``angular-kernel``: the defining convolution in polar coordinates around
  x.  The angular integral has the closed form

      ∫_0^π (r² + s² - 2rs cos φ)^{-ν} sin^{d-2}φ dφ
          = B((d-1)/2, 1/2) M^{-2ν} ₂F₁(ν, ν - d/2 + 1; d/2; ρ²),

  with ν = (d-α)/2, M = max(r, s), ρ = min(r, s)/M, so one radial
  quadrature remains.  It behaves like |r-s|^{α-1} near s = r when α < 1.
* ``ek-factorized``:  2^{-α} r^{2-d} I^{α/2}_{+,2} s^{d-α-2} I^{α/2}_{-,2} f.
"""

import logging
import math
from enum import Enum
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy import special

from fractional.erdelyi_kober import ek_minus_profile, ek_plus
from fractional.pipeline import derivative_chain
from fractional.profiles import GridSpec, RadialProfile, riesz_asymptotics, tabulate
from numerics.errors import DivergenceError, DomainError
from numerics.quadrature import (DEFAULT_SPEC, EndpointSingularity, QuadratureSpec,
                                 integrate_singular, integrate_tail)
from numerics.special import beta_function, gamma_ratio, riesz_normalization, sphere_area

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# closest approach to s = r at which the angular kernel is evaluated
_KERNEL_CLAMP = 1e-12


class RieszBackend(Enum):
    ANGULAR = 'angular-kernel'
    EK = 'ek-factorized'

    @classmethod
    def of(cls, value: Union['RieszBackend', str]) -> 'RieszBackend':
        if isinstance(value, RieszBackend):
            return value
        for backend in cls:
            if backend.value == value:
                return backend
        raise DomainError(f"unknown Riesz backend {value!r}")


def riesz_ek_constant(alpha: float) -> float:
    """Constant 2^{-α} of the EK-factorized representation.

    Derived analytically: writing both power kernels in t² leaves Γ-factors
    that cancel against the Riesz normalization except for 2^{-α}.
    calibrate_riesz_constant measures the same number against the angular
    kernel and is the regression check for it.
    """
    return 2.0 ** (-alpha)


def riesz_power_coefficient(alpha: float, d: int, lam: float) -> float:
    """C with I^α_d |x|^{-λ} = C |x|^{α-λ}, for α < λ < d."""
    if not alpha < lam < d:
        raise DomainError(f"power-law Riesz potential needs alpha < lambda < d, "
                          f"got alpha={alpha}, lambda={lam}, d={d}")
    return gamma_ratio([(lam - alpha) / 2.0, (d - lam) / 2.0],
                       [lam / 2.0, (d - lam + alpha) / 2.0], prefactor=2.0 ** (-alpha))


def _check_order(alpha: float, d: int) -> None:
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")
    if not 0.0 < alpha < d:
        raise DomainError(f"Riesz order must satisfy 0 < alpha < d, got alpha={alpha}, d={d}")


def check_riesz_admissible(f: RadialProfile, alpha: float, d: int) -> None:
    """Raise DivergenceError unless the declared exponents make I^α_d f finite."""
    if f.is_zero:
        return
    if not f.decays_exponentially and not f.tail_exponent < -alpha:
        raise DivergenceError(
            f"I^{alpha:g}_{d} of {f.label} diverges: tail t^{f.tail_exponent:g} needs an "
            f"exponent below {-alpha:g}")
    if not f.head_exponent > -d:
        raise DivergenceError(
            f"I^{alpha:g}_{d} of {f.label} diverges: t^{f.head_exponent:g} near 0 is not "
            f"integrable in dimension {d}")


def _angular_kernel(alpha: float, d: int, r: float, s: np.ndarray) -> np.ndarray:
    if d == 1:
        return np.abs(r - s) ** (alpha - 1.0) + (r + s) ** (alpha - 1.0)
    nu = (d - alpha) / 2.0
    big = np.maximum(r, s)
    rho = np.minimum(r, s) / big
    return big ** (-2.0 * nu) * special.hyp2f1(nu, nu - d / 2.0 + 1.0, d / 2.0, rho * rho)


def _angular_single(f: RadialProfile, alpha: float, d: int, r: float,
                    spec: QuadratureSpec) -> float:
    head = f.head_exponent
    regular = f.regular_part()
    near_exponent = min(0.0, alpha - 1.0)

    def inner(s):
        s = np.maximum(s, r * 1e-20)
        return regular(s) * _angular_kernel(alpha, d, r, s)

    def below(v):
        v = np.maximum(v, r * _KERNEL_CLAMP)
        s = r - v
        return f(s) * s ** (d - 1.0) * _angular_kernel(alpha, d, r, s) * v ** (-near_exponent)

    def above(v):
        v = np.maximum(v, r * _KERNEL_CLAMP)
        s = r + v
        return f(s) * s ** (d - 1.0) * _angular_kernel(alpha, d, r, s) * v ** (-near_exponent)

    total = integrate_singular(inner, 0.0, 0.5 * r, EndpointSingularity(head + d - 1.0, 0.0), spec)
    total += integrate_singular(below, 0.0, 0.5 * r, EndpointSingularity(near_exponent, 0.0), spec)
    total += integrate_singular(above, 0.0, r, EndpointSingularity(near_exponent, 0.0), spec)
    total += integrate_tail(lambda s: f(s) * s ** (d - 1.0) * _angular_kernel(alpha, d, r, s),
                            2.0 * r, f.decay(alpha - 1.0), spec)
    if d == 1:
        prefactor = 1.0 / riesz_normalization(1, alpha)
    else:
        prefactor = (sphere_area(d - 1) * beta_function((d - 1) / 2.0, 0.5)
                     / riesz_normalization(d, alpha))
    return prefactor * total


def riesz_radial(f: RadialProfile, alpha: float, d: int, r: ArrayLike,
                 backend: Union[RieszBackend, str] = RieszBackend.EK,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Riesz potential (I^α_d f)(r) of the radial function x ↦ f(|x|).

    Args:
        f: Radial profile
        alpha: Order, 0 < alpha < d
        d: Ambient dimension
        r: Radius or radii (> 0)
        backend: 'ek-factorized' (default) or 'angular-kernel'
        spec: Quadrature tolerances

    Raises:
        DomainError: alpha outside (0, d)
        DivergenceError: declared exponents make the potential infinite
    """
    _check_order(alpha, d)
    backend = RieszBackend.of(backend)
    radii = np.atleast_1d(np.asarray(r, dtype=float)).ravel()
    if np.any(~(radii > 0)):
        raise DomainError("Riesz potentials are evaluated at r > 0 only")
    if f.is_zero:
        values = np.zeros_like(radii)
    else:
        check_riesz_admissible(f, alpha, d)
        spec = spec.floored(f.peak)
        if backend is RieszBackend.EK:
            inner = ek_minus_profile(f, alpha / 2.0, spec).times_power(d - alpha - 2.0)
            values = (riesz_ek_constant(alpha) * radii ** (2.0 - d)
                      * np.atleast_1d(ek_plus(inner, alpha / 2.0, radii, spec)))
        else:
            values = np.array([_angular_single(f, alpha, d, float(x), spec) for x in radii])
    return float(values[0]) if np.ndim(r) == 0 else values.reshape(np.shape(r))


def riesz_profile(f: RadialProfile, alpha: float, d: int,
                  backend: Union[RieszBackend, str] = RieszBackend.EK,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """I^α_d f as a lazily evaluated profile with propagated exponents."""
    _check_order(alpha, d)
    if f.is_zero:
        return RadialProfile.zero()
    check_riesz_admissible(f, alpha, d)
    head, tail = riesz_asymptotics(f.head_exponent, f.tail_exponent, alpha, d, f.homogeneous)
    return RadialProfile.composite(lambda r: riesz_radial(f, alpha, d, r, backend, spec),
                                   head, tail, accuracy=max(f.accuracy, spec.rel_tol),
                                   label=f'I^{alpha:g}_{d}[{f.label}]', scale=f.scale,
                                   homogeneous=f.homogeneous)


def calibrate_riesz_constant(alpha: float, d: int,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> Dict[str, float]:
    """Fit the EK-factorized constant against the angular kernel on a power law.

    Uses f(t) = t^{-λ} with λ = (α+d)/2, evaluated at r = 1.
    """
    _check_order(alpha, d)
    lam = (alpha + d) / 2.0
    f = RadialProfile.power_law(lam)
    angular = riesz_radial(f, alpha, d, 1.0, RieszBackend.ANGULAR, spec)
    frozen = riesz_ek_constant(alpha)
    unnormalized = riesz_radial(f, alpha, d, 1.0, RieszBackend.EK, spec) / frozen
    ratio = angular / unnormalized
    result = {
        'alpha': alpha, 'd': d, 'lambda': lam,
        'angular': angular,
        'ek_unnormalized': unnormalized,
        'closed_form': riesz_power_coefficient(alpha, d, lam),
        'ratio': ratio,
        'frozen': frozen,
        'relative_deviation': abs(ratio / frozen - 1.0),
    }
    logger.info("Riesz constant calibration alpha=%g d=%d: ratio %.12g (frozen %.12g)",
                alpha, d, ratio, frozen)
    return result


def riesz_semigroup_check(f: RadialProfile, alpha: float, beta: float, d: int,
                          probes: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC,
                          grid: GridSpec = GridSpec(), workers: Optional[int] = None) -> float:
    """Max relative deviation of I^α I^β f from I^{α+β} f at the probe radii.

    The inner potential is tabulated on ``grid`` before the outer one runs.
    """
    _check_order(alpha + beta, d)
    probes = np.asarray(probes, dtype=float)
    inner = tabulate(riesz_profile(f, beta, d, spec=spec), grid, workers=workers)
    composed = np.atleast_1d(riesz_radial(inner, alpha, d, probes, spec=spec))
    direct = np.atleast_1d(riesz_radial(f, alpha + beta, d, probes, spec=spec))
    return float(np.max(np.abs(composed - direct) / (np.abs(direct) + spec.abs_tol)))


def riesz_inverse_radial(phi: RadialProfile, alpha: float, d: int, radii: Sequence[float],
                         spec: QuadratureSpec = DEFAULT_SPEC, grid: GridSpec = GridSpec(),
                         workers: Optional[int] = None) -> RadialProfile:
    """Recover f from φ = I^α_d f on radial profiles.

        f = 2^α D^{α/2}_{-,2} r^{2+α-d} D^{α/2}_{+,2} r^{d-2} φ

    Returns a grid profile on ``radii`` (see derivative_chain for metadata).
    """
    _check_order(alpha, d)
    return derivative_chain(phi, radii, pre_power=d - 2.0, plus_order=alpha / 2.0,
                            mid_power=2.0 + alpha - d, minus_order=alpha / 2.0,
                            constant=1.0 / riesz_ek_constant(alpha), spec=spec, grid=grid,
                            workers=workers, label=f'riesz-inverse[{phi.label}]')
