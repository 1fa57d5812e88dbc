"""Radial transforms between affine Grassmannians.

For radial f every transform below is a composition of Erdélyi–Kober
integrals in t² and powers of the radius; the Strichartz transform is

    (R^k_{p,q} f)(ζ) = c̃₁ s^{2+k-n} (I^{q/2}_{+,2} r^{ℓ-2} I^{l/2}_{-,2} f₀)(s),
    c̃₁ = π^{l/2} Γ((n-k)/2) / Γ(ℓ/2),      s = |ζ|,

and its dual is the same expression for the configuration with q and l
exchanged.  The sample is evaluated at s = 0 by continuity.
"""

import logging
import math
from dataclasses import replace
from typing import Dict, Optional, Sequence, Union

import numpy as np

from fractional.erdelyi_kober import (ek_minus, ek_minus_at_zero, ek_minus_profile, ek_plus,
                                      ek_plus_profile)
from fractional.profiles import (GridSpec, NodeCache, RadialProfile, ek_asymptotics_minus,
                                 ek_asymptotics_plus, tabulate)
from fractional.riesz import RieszBackend, riesz_profile, riesz_radial
from numerics.errors import DivergenceError, DomainError
from numerics.quadrature import (DEFAULT_SPEC, EndpointSingularity, QuadratureSpec,
                                 integrate_singular, integrate_tail)
from numerics.special import gamma_ratio, sphere_area
from radon.config import GrassmannConfig
from radon.existence import DUAL, FORWARD, check_existence

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# consistency of the two normalizations is reported against this tolerance
AUDIT_TOLERANCE = 1e-6
_SMALLEST_R = 1e-20


def _radii(s: ArrayLike, allow_zero: bool, what: str) -> np.ndarray:
    radii = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
    bad = ~(radii >= 0) if allow_zero else ~(radii > 0)
    if np.any(bad):
        bound = 'nonnegative' if allow_zero else 'positive'
        raise DomainError(f"{what} needs {bound} radii")
    return radii


def _shaped(values: np.ndarray, s: ArrayLike) -> ArrayLike:
    values = np.asarray(values, dtype=float)
    return float(values[0]) if np.ndim(s) == 0 else values.reshape(np.shape(s))


def _split_at_origin(radii: np.ndarray, at_zero, positive) -> np.ndarray:
    out = np.empty_like(radii)
    zero = radii == 0.0
    if zero.any():
        out[zero] = at_zero()
    if (~zero).any():
        out[~zero] = np.atleast_1d(positive(radii[~zero]))
    return out


# k-plane and inclusion transforms

def inclusion_radial(f: RadialProfile, jj: int, kk: int, nn: int, s: ArrayLike,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """R_{j,k} f at distance s: σ_{m-1} ∫_s^∞ f₀(r)(r²-s²)^{m/2-1} r dr, m = k-j.

    Equals π^{m/2} (I^{m/2}_{-,2} f₀)(s); jj = 0 gives the k-plane transform.

    Raises:
        DivergenceError: f₀ does not decay fast enough
    """
    if not 0 <= jj < kk < nn:
        raise DomainError(f"inclusion transform needs 0 <= j < k < n, got j={jj}, k={kk}, n={nn}")
    radii = _radii(s, True, 'inclusion transform')
    half = (kk - jj) / 2.0
    scale = math.pi ** half
    values = _split_at_origin(radii, lambda: scale * ek_minus_at_zero(f, half, spec),
                              lambda r: scale * np.atleast_1d(ek_minus(f, half, r, spec)))
    return _shaped(values, s)


def kplane_radial(f: RadialProfile, n: int, k: int, s: ArrayLike,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """k-plane transform R_k f at planes of distance s from the origin."""
    return inclusion_radial(f, 0, k, n, s, spec)


def kplane_profile(f: RadialProfile, n: int, k: int,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """R_k f as a radial profile on the (n-k)-dimensional fiber."""
    if not 0 < k < n:
        raise DomainError(f"k-plane transform needs 0 < k < n, got k={k}, n={n}")
    profile = ek_minus_profile(f, k / 2.0, spec).scaled(math.pi ** (k / 2.0))
    return replace(profile, label=f'R_{k}[{f.label}]')


def kplane_direct(f: RadialProfile, k: int, z: ArrayLike,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """R_k f by the defining integral σ_{k-1} ∫_0^∞ f₀(√(ρ²+z²)) ρ^{k-1} dρ."""
    if k < 1:
        raise DomainError(f"k-plane transform needs k >= 1, got {k}")
    radii = _radii(z, False, 'direct k-plane transform')
    split = np.maximum(radii, f.scale)
    values = np.empty_like(radii)
    for i, (z_i, cut) in enumerate(zip(radii, split)):
        def integrand(rho, z_i=z_i):
            return f(np.sqrt(z_i * z_i + rho * rho))
        total = integrate_singular(integrand, 0.0, cut, EndpointSingularity(k - 1.0, 0.0), spec)
        total += integrate_tail(lambda rho: integrand(rho) * rho ** (k - 1.0), cut,
                                f.decay(k - 1.0), spec)
        values[i] = sphere_area(k) * total
    return _shaped(values, z)


def dual_kplane_radial(phi: RadialProfile, n: int, k: int, r: ArrayLike,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """R_k^* φ at |x| = r for φ depending on the distance of a k-plane.

        Γ(n/2)/Γ((n-k)/2) · r^{2-n} (I^{k/2}_{+,2} s^{n-k-2} φ₀)(r)

    Constants are preserved.  k = 0 is the identity.

    Raises:
        DivergenceError: φ₀ s^{n-k-1} is not integrable at 0
    """
    if not 0 <= k < n:
        raise DomainError(f"dual k-plane transform needs 0 <= k < n, got k={k}, n={n}")
    radii = _radii(r, False, 'dual k-plane transform')
    if k == 0:
        return _shaped(np.atleast_1d(phi(radii)), r)
    constant = gamma_ratio([n / 2.0], [(n - k) / 2.0])
    weighted = phi.times_power(n - k - 2.0)
    values = constant * radii ** (2.0 - n) * np.atleast_1d(ek_plus(weighted, k / 2.0, radii, spec))
    return _shaped(values, r)


def dual_kplane_profile(phi: RadialProfile, n: int, k: int,
                        spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    if not 0 <= k < n:
        raise DomainError(f"dual k-plane transform needs 0 <= k < n, got k={k}, n={n}")
    if k == 0:
        return phi
    profile = (ek_plus_profile(phi.times_power(n - k - 2.0), k / 2.0, spec)
               .times_power(2.0 - n)
               .scaled(gamma_ratio([n / 2.0], [(n - k) / 2.0])))
    return replace(profile, label=f'R*_{k}[{phi.label}]')


# Strichartz transforms

def fiber_integral(profile: RadialProfile, weight: RadialProfile, dim: int,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """∫_{R^dim} φ(|y|) w(|y|) dy = π^{dim/2} (I^{dim/2}_{-,2} φw)(0).

    With dim = n-k this is the pairing of two radial functions on G(n, k)
    after integrating out the direction.
    """
    if profile.is_zero or weight.is_zero:
        return 0.0
    product = RadialProfile.composite(
        lambda t: profile(t) * weight(t),
        profile.head_exponent + weight.head_exponent,
        profile.tail_exponent + weight.tail_exponent,
        accuracy=max(profile.accuracy, weight.accuracy),
        label=f"{profile.label}*{weight.label}", scale=max(profile.scale, weight.scale),
        breakpoints=tuple(sorted(set(profile.breakpoints) | set(weight.breakpoints))))
    return math.pi ** (dim / 2.0) * ek_minus_at_zero(product, dim / 2.0, spec)


def normalization_factorized(cfg: GrassmannConfig) -> float:
    """c̃₁ = π^{l/2} Γ((n-k)/2) / Γ(ℓ/2)."""
    return gamma_ratio([(cfg.n - cfg.k) / 2.0], [cfg.ell / 2.0],
                       prefactor=math.pi ** (cfg.l / 2.0))


def normalization_direct(cfg: GrassmannConfig) -> float:
    """c₁ = σ_{l-1} σ_{q-1} σ_{ℓ-1} / σ_{n-k-1} (sphere areas)."""
    if cfg.l == 0 or cfg.q == 0:
        raise DomainError(f"c₁ needs l > 0 and q > 0, got {cfg}")
    return (sphere_area(cfg.l) * sphere_area(cfg.q) * sphere_area(cfg.ell)
            / sphere_area(cfg.n - cfg.k))


def forward_exponents(f: RadialProfile, cfg: GrassmannConfig) -> tuple:
    """(head, tail) exponents of R^k_{p,q} f from those of f."""
    head, tail = f.head_exponent, f.tail_exponent
    if cfg.l > 0:
        head, tail = ek_asymptotics_minus(head, tail, cfg.l / 2.0, f.homogeneous)
    head, tail = head + cfg.ell - 2.0, tail + cfg.ell - 2.0
    if cfg.q > 0:
        head, tail = ek_asymptotics_plus(head, tail, cfg.q / 2.0, f.homogeneous)
    shift = 2.0 + cfg.k - cfg.n
    return head + shift, tail + shift


def _require_existence(f: RadialProfile, cfg: GrassmannConfig, side: str) -> None:
    verdict = check_existence(f, cfg, side)
    if not verdict.ok:
        raise DivergenceError(f"{side} transform of {f.label} for {cfg} does not exist: "
                              + '; '.join(verdict.messages))


def _value_at_origin(f: RadialProfile, cfg: GrassmannConfig, spec: QuadratureSpec) -> float:
    # the limit s -> 0 of the factorized form is π^{l/2} (I^{l/2}_{-,2} f₀)(0)
    if cfg.l > 0:
        return math.pi ** (cfg.l / 2.0) * ek_minus_at_zero(f, cfg.l / 2.0, spec)
    if f.head_exponent > 0:
        return 0.0
    if f.head_exponent < 0:
        raise DivergenceError(f"transform of {f.label} is unbounded at the origin")
    return float(f.regular_part()(np.array([_SMALLEST_R]))[0])


def strichartz_forward_radial(f: RadialProfile, cfg: GrassmannConfig, s: ArrayLike,
                              spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """(R^k_{p,q} f)(ζ) for radial f, as a function of s = |ζ| >= 0.

    Raises:
        DivergenceError: f fails the existence conditions (checked before any
            quadrature runs)
    """
    _require_existence(f, cfg, FORWARD)
    radii = _radii(s, True, 'Strichartz transform')
    if f.is_zero:
        return _shaped(np.zeros_like(radii), s)
    constant = normalization_factorized(cfg)
    inner = ek_minus_profile(f, cfg.l / 2.0, spec) if cfg.l > 0 else f
    cache = NodeCache(inner)
    inner = cache.as_profile()

    def positive(r):
        if cfg.q == 0:
            # I^0_{+,2} is the identity and c̃₁ s^{2+k-n} r^{ℓ-2} collapses to π^{l/2}
            return math.pi ** (cfg.l / 2.0) * np.atleast_1d(inner(r))
        weighted = inner.times_power(cfg.ell - 2.0)
        return constant * r ** (2.0 + cfg.k - cfg.n) * np.atleast_1d(
            ek_plus(weighted, cfg.q / 2.0, r, spec))

    values = _split_at_origin(radii, lambda: _value_at_origin(f, cfg, spec), positive)
    logger.debug("forward %s of %s: %d inner evaluations cached (%d hits)", cfg, f.label,
                 len(cache), cache.hits)
    return _shaped(values, s)


def strichartz_forward_profile(f: RadialProfile, cfg: GrassmannConfig,
                               spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    """R^k_{p,q} f as a lazily evaluated profile with propagated exponents."""
    _require_existence(f, cfg, FORWARD)
    if f.is_zero:
        return RadialProfile.zero()
    head, tail = forward_exponents(f, cfg)
    return RadialProfile.composite(lambda r: strichartz_forward_radial(f, cfg, r, spec),
                                   head, tail, accuracy=max(f.accuracy, spec.rel_tol),
                                   label=f'R{cfg}[{f.label}]', scale=f.scale,
                                   homogeneous=f.homogeneous)


def strichartz_dual_radial(g: RadialProfile, cfg: GrassmannConfig, t: ArrayLike,
                           spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Dual transform R^j_{p,l} g at |τ| = t: the forward formula on (n, p, l, q).

    The constant becomes c̃₂ = π^{q/2} Γ((n-j)/2) / Γ(ℓ/2).
    """
    _require_existence(g, cfg, DUAL)
    return strichartz_forward_radial(g, cfg.swapped(), t, spec)


def strichartz_dual_profile(g: RadialProfile, cfg: GrassmannConfig,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> RadialProfile:
    _require_existence(g, cfg, DUAL)
    return strichartz_forward_profile(g, cfg.swapped(), spec)


def strichartz_forward_direct(f: RadialProfile, cfg: GrassmannConfig, s: ArrayLike,
                              spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """Forward transform through the unreduced integrals and the constant c₁.

        c₁ s^{2+k-n} ∫_0^s (s²-r²)^{q/2-1} r^{ℓ-1} F(r) dr,
        F(r) = ∫_r^∞ f₀(t)(t²-r²)^{l/2-1} t dt

    The outer integral runs in r directly.  With q = 0 the result is
    σ_{l-1} F(s).
    """
    _require_existence(f, cfg, FORWARD)
    if cfg.l == 0:
        raise DomainError(f"the direct form needs l > 0, got {cfg}")
    radii = _radii(s, True, 'Strichartz transform')
    if f.is_zero:
        return _shaped(np.zeros_like(radii), s)
    half_l = cfg.l / 2.0
    # F = Γ(l/2)/2 · I^{l/2}_{-,2} f₀
    inner = NodeCache(ek_minus_profile(f, half_l, spec).scaled(math.gamma(half_l) / 2.0))
    if cfg.q == 0:
        def positive(r):
            return sphere_area(cfg.l) * np.atleast_1d(inner(r))
    else:
        constant = normalization_direct(cfg)
        head = inner.profile.head_exponent
        inner_profile = inner.as_profile()
        regular = inner_profile.regular_part()
        half_q = cfg.q / 2.0
        sing_left = cfg.ell - 1.0 + head

        def outer(s_i):
            def integrand(r):
                bounded = regular(np.maximum(r, s_i * _SMALLEST_R))
                return bounded * (s_i + r) ** (half_q - 1.0)
            integral = integrate_singular(integrand, 0.0, s_i,
                                          EndpointSingularity(sing_left, half_q - 1.0), spec)
            return constant * s_i ** (2.0 + cfg.k - cfg.n) * integral

        def positive(r):
            return np.array([outer(float(x)) for x in r])

    values = _split_at_origin(radii, lambda: _value_at_origin(f, cfg, spec), positive)
    return _shaped(values, s)


def consistency_audit(cfg: GrassmannConfig, f: RadialProfile, probes: Sequence[float],
                      spec: QuadratureSpec = DEFAULT_SPEC) -> Dict:
    """Compare the c̃₁ (factorized) and c₁ (direct) routes on ``f``.

    Returns a dict with both constants, their predicted ratio
    c₁Γ(l/2)Γ(q/2)/(4c̃₁), the two sets of values, their pointwise ratios
    and 'consistent' (max relative deviation within AUDIT_TOLERANCE).
    """
    probes = np.asarray(probes, dtype=float)
    c1_tilde = normalization_factorized(cfg)
    c1 = normalization_direct(cfg)
    predicted = c1 * math.gamma(cfg.l / 2.0) * math.gamma(cfg.q / 2.0) / (4.0 * c1_tilde)
    factorized = np.atleast_1d(strichartz_forward_radial(f, cfg, probes, spec))
    direct = np.atleast_1d(strichartz_forward_direct(f, cfg, probes, spec))
    ratios = direct / factorized
    deviation = float(np.max(np.abs(ratios - 1.0)))
    result = {
        'config': cfg.as_dict(),
        'profile': f.label,
        'c1': c1,
        'c1_tilde': c1_tilde,
        'constant_ratio': predicted,
        'probes': probes.tolist(),
        'factorized': factorized.tolist(),
        'direct': direct.tolist(),
        'ratios': ratios.tolist(),
        'max_relative_deviation': deviation,
        'consistent': deviation <= AUDIT_TOLERANCE and abs(predicted - 1.0) <= AUDIT_TOLERANCE,
    }
    if not result['consistent']:
        logger.warning("c1/c1~ routes disagree for %s on %s: max deviation %.3e",
                       cfg, f.label, deviation)
    return result


# compositions

def gonzalez_radial(f: RadialProfile, n: int, j: int, k: int, s: ArrayLike,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> ArrayLike:
    """R^k_j f: the dual j-plane transform in n-k dimensions of R_k f.

    Coincides with the forward transform for p = 0, q = j, l = k.
    """
    if not (j >= 1 and k >= 1 and j + k < n):
        raise DomainError(f"Gonzalez transform needs j, k >= 1 and j+k < n, "
                          f"got n={n}, j={j}, k={k}")
    _require_existence(f, GrassmannConfig(n, 0, j, k, 'special'), FORWARD)
    fiber = NodeCache(kplane_profile(f, n, k, spec)).as_profile()
    return dual_kplane_radial(fiber, n - k, j, s, spec)


def semyanistyi_radial(f: RadialProfile, n: int, k: int, alpha: float, s: ArrayLike,
                       spec: QuadratureSpec = DEFAULT_SPEC, grid: GridSpec = GridSpec(),
                       backend: Union[RieszBackend, str] = RieszBackend.EK,
                       workers: Optional[int] = None) -> ArrayLike:
    """P^α_k f = I^α_{n-k} R_k f at k-planes of distance s.

    R_k f is tabulated on ``grid`` before the potential is taken.
    """
    if not 0.0 < alpha < n - k:
        raise DomainError(f"Semyanistyi order must satisfy 0 < alpha < n-k, got {alpha}")
    fiber = tabulate(kplane_profile(f, n, k, spec), grid, workers=workers)
    return riesz_radial(fiber, alpha, n - k, s, backend, spec)


def semyanistyi_profile(f: RadialProfile, n: int, k: int, alpha: float,
                        spec: QuadratureSpec = DEFAULT_SPEC, grid: GridSpec = GridSpec(),
                        workers: Optional[int] = None) -> RadialProfile:
    if not 0.0 < alpha < n - k:
        raise DomainError(f"Semyanistyi order must satisfy 0 < alpha < n-k, got {alpha}")
    fiber = tabulate(kplane_profile(f, n, k, spec), grid, workers=workers)
    return riesz_profile(fiber, alpha, n - k, spec=spec)


def semyanistyi_direct_radial(f: RadialProfile, n: int, k: int, alpha: float, s: ArrayLike,
                              spec: QuadratureSpec = DEFAULT_SPEC,
                              grid: GridSpec = GridSpec(),
                              workers: Optional[int] = None) -> ArrayLike:
    """P^α_k f from the kernel |x-ζ|^{α+k-n}: the plane integral done directly
    and the fiber convolution with the angular kernel."""
    if not 0.0 < alpha < n - k:
        raise DomainError(f"Semyanistyi order must satisfy 0 < alpha < n-k, got {alpha}")
    fiber = kplane_profile(f, n, k, spec)
    direct = RadialProfile.composite(lambda z: kplane_direct(f, k, z, spec),
                                     fiber.head_exponent, fiber.tail_exponent,
                                     accuracy=fiber.accuracy, label=f'R_{k}direct[{f.label}]',
                                     scale=f.scale)
    return riesz_radial(tabulate(direct, grid, workers=workers), alpha, n - k, s,
                        RieszBackend.ANGULAR, spec)


def semyanistyi_dual_radial(phi: RadialProfile, n: int, k: int, alpha: float, r: ArrayLike,
                            spec: QuadratureSpec = DEFAULT_SPEC, grid: GridSpec = GridSpec(),
                            workers: Optional[int] = None) -> ArrayLike:
    """P^{α*}_k φ = R_k^* I^α_{n-k} φ at |x| = r."""
    if not 0.0 < alpha < n - k:
        raise DomainError(f"Semyanistyi order must satisfy 0 < alpha < n-k, got {alpha}")
    potential = tabulate(riesz_profile(phi, alpha, n - k, spec=spec), grid, workers=workers)
    return dual_kplane_radial(potential, n, k, r, spec)
