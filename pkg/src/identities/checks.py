"""Numerical verification of the identities connecting R^k_{p,q} with Riesz
potentials, k-plane transforms and Semyanistyi integrals.

Each check assembles both sides from radial compositions, evaluates them on
the probe radii and classifies the outcome in an IdentityReport.  Parameter
errors raise DomainError; a side that cannot be evaluated gives a report
with verdict 'fail' and the error messages.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from fractional.profiles import GridSpec, RadialProfile, tabulate
from fractional.riesz import riesz_inverse_radial, riesz_profile, riesz_radial
from identities.constants import constant
from identities.reports import (DEFAULT_PROBES, TOLERANCES, IdentityReport, build_report,
                                failed_report)
from numerics.errors import DivergenceError, DomainError, QuadratureAccuracyError
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec
from radon.config import GrassmannConfig
from radon.transforms import (dual_kplane_profile, dual_kplane_radial, fiber_integral,
                              kplane_profile, kplane_radial, semyanistyi_dual_radial,
                              semyanistyi_profile, semyanistyi_radial, strichartz_dual_profile,
                              strichartz_forward_profile, strichartz_forward_radial)

logger = logging.getLogger(__name__)

DEFAULT_SUITE_CONFIGS = ((4, 1, 1, 1), (6, 1, 1, 1), (7, 1, 2, 2))
SUITE_PROFILES = ('gaussian', 'power-law')


@dataclass(frozen=True)
class CheckSettings:
    """Numerical settings shared by all checks."""
    spec: QuadratureSpec = DEFAULT_SPEC
    grid: GridSpec = GridSpec()
    probes: Tuple[float, ...] = DEFAULT_PROBES
    workers: Optional[int] = None
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(TOLERANCES))

    def tolerance(self, level: str) -> float:
        return self.tolerances[level]

    def tab(self, profile: RadialProfile) -> RadialProfile:
        if profile.is_zero:
            return profile
        return tabulate(profile, self.grid, workers=self.workers)


DEFAULT_SETTINGS = CheckSettings()


def _evaluate(name: str, cfg: GrassmannConfig, probes: Sequence[float], tolerance: float,
              parameters: Dict, compute: Callable[[], Tuple], **report_args) -> IdentityReport:
    try:
        lhs, rhs = compute()
    except (DivergenceError, QuadratureAccuracyError) as e:
        return failed_report(name, cfg.as_dict(), probes, tolerance, [str(e)], parameters)
    return build_report(name, cfg.as_dict(), probes, np.atleast_1d(lhs), np.atleast_1d(rhs),
                        tolerance, parameters=parameters, **report_args)

# intertwining with Riesz potentials

def check_intertwining(f: RadialProfile, cfg: GrassmannConfig, alpha: float,
                       settings: CheckSettings = DEFAULT_SETTINGS,
                       side: str = 'forward') -> IdentityReport:
    """R^k_{p,q} I^α_{n-j} f = I^α_{n-k} R^k_{p,q} f for 0 < α < n-k-q.

    side='dual' checks R^j_{p,l} I^α_{n-k} g = I^α_{n-j} R^j_{p,l} g.
    """
    if side not in ('forward', 'dual'):
        raise DomainError(f"side must be 'forward' or 'dual', got {side!r}")
    effective = cfg if side == 'forward' else cfg.swapped()
    if not 0.0 < alpha < effective.ell:
        raise DomainError(f"intertwining needs 0 < alpha < n-k-q = {effective.ell}, got {alpha}")
    probes = settings.probes
    spec = settings.spec
    n, j, k = effective.n, effective.j, effective.k

    def compute():
        smoothed = settings.tab(riesz_profile(f, alpha, n - j, spec=spec))
        lhs = strichartz_forward_radial(smoothed, effective, probes, spec)
        transformed = settings.tab(strichartz_forward_profile(f, effective, spec))
        rhs = riesz_radial(transformed, alpha, n - k, probes, spec=spec)
        return lhs, rhs

    return _evaluate(f'intertwining-{side}', cfg, probes, settings.tolerance('double'),
                     {'alpha': alpha, 'profile': f.label}, compute)


# weighted duality

def _duality_window(cfg: GrassmannConfig, which: int) -> Tuple[float, float]:
    return (cfg.l, cfg.n - cfg.j) if which == 1 else (cfg.q, cfg.n - cfg.k)


def check_weighted_duality(profile: RadialProfile, cfg: GrassmannConfig, lam: Optional[float],
                           which: int, settings: CheckSettings = DEFAULT_SETTINGS
                           ) -> IdentityReport:
    """One of the four weighted duality identities, as 1-D fiber integrals.

    1: ∫ R^j_{p,l} g |τ|^{-λ} = c₁ ∫ g |ζ|^{l-λ},            l < λ < n-j
    2: ∫ R^k_{p,q} f |ζ|^{-λ} = c₂ ∫ f |τ|^{q-λ},            q < λ < n-k
    3: ∫ R^j_{p,l} g (1+|τ|²)^{-(n-p)/2} = c₃ ∫ g (1+|ζ|²)^{-(n-k-q)/2}
    4: ∫ R^k_{p,q} f (1+|ζ|²)^{-(n-p)/2} = c₄ ∫ f (1+|τ|²)^{-(n-j-l)/2}
    """
    if which not in (1, 2, 3, 4):
        raise DomainError(f"weighted duality identity must be 1-4, got {which}")
    n, p, j, k, l, q = cfg.n, cfg.p, cfg.j, cfg.k, cfg.l, cfg.q
    if which in (1, 2):
        low, high = _duality_window(cfg, which)
        if lam is None or not low < lam < high:
            raise DomainError(f"identity {which} needs {low} < lambda < {high}, got {lam}")
    spec = settings.spec
    name = f'weighted-duality-{which}'

    def compute():
        if which == 1:
            c = constant('c1', cfg, lam=lam)
            lhs = fiber_integral(strichartz_dual_profile(profile, cfg, spec),
                                 RadialProfile.power_law(lam), n - j, spec)
            rhs = c * fiber_integral(profile, RadialProfile.power_law(lam - l), n - k, spec)
        elif which == 2:
            c = constant('c2', cfg, lam=lam)
            lhs = fiber_integral(strichartz_forward_profile(profile, cfg, spec),
                                 RadialProfile.power_law(lam), n - k, spec)
            rhs = c * fiber_integral(profile, RadialProfile.power_law(lam - q), n - j, spec)
        elif which == 3:
            c = constant('c3', cfg)
            lhs = fiber_integral(strichartz_dual_profile(profile, cfg, spec),
                                 RadialProfile.generalized_cauchy(n - p), n - j, spec)
            rhs = c * fiber_integral(profile, RadialProfile.generalized_cauchy(n - k - q),
                                     n - k, spec)
        else:
            c = constant('c4', cfg)
            lhs = fiber_integral(strichartz_forward_profile(profile, cfg, spec),
                                 RadialProfile.generalized_cauchy(n - p), n - k, spec)
            rhs = c * fiber_integral(profile, RadialProfile.generalized_cauchy(n - j - l),
                                     n - j, spec)
        return [lhs], [rhs]

    probes = [float(lam)] if lam is not None else [0.0]
    return _evaluate(name, cfg, probes, settings.tolerance('single'),
                     {'lambda': lam, 'profile': profile.label, 'which': which}, compute)


# Semyanistyi relations

def check_semyanistyi(f: RadialProfile, cfg: GrassmannConfig, alpha: float, which: str,
                      settings: CheckSettings = DEFAULT_SETTINGS) -> IdentityReport:
    """Relations between R^k_{p,q} and Semyanistyi integrals.

    forwardside:  R^k_{p,q} P^α_j f = c P^{q+α}_k f      (f on R^n; α = 0 uses R_j)
    dualside:     P^{α*}_k R^k_{p,q} f = c P^{(α+l)*}_j f (f on j-planes; α = 0 uses R_k^*)

    The right side uses the registry constant; the report lists the
    alternative readings and names the one matching the fitted ratio.
    """
    n, j, k, l, q = cfg.n, cfg.j, cfg.k, cfg.l, cfg.q
    if alpha < 0:
        raise DomainError(f"Semyanistyi order must be nonnegative, got {alpha}")
    probes = settings.probes
    spec, grid, workers = settings.spec, settings.grid, settings.workers

    if which == 'forwardside':
        if not q + alpha < n - k or (alpha > 0 and not alpha < n - j):
            raise DomainError(f"forwardside relation needs q+alpha < n-k and alpha < n-j, "
                              f"got alpha={alpha} for {cfg}")
        used = constant('semyanistyi_forwardside', cfg)
        candidates = {'semyanistyi_forwardside': used,
                      'semyanistyi_forwardside_alt': constant('semyanistyi_forwardside_alt', cfg)}

        def compute():
            if alpha == 0:
                inner = settings.tab(kplane_profile(f, n, j, spec))
            else:
                inner = settings.tab(semyanistyi_profile(f, n, j, alpha, spec, grid, workers))
            lhs = strichartz_forward_radial(inner, cfg, probes, spec)
            rhs = used * np.atleast_1d(
                semyanistyi_radial(f, n, k, q + alpha, probes, spec, grid, workers=workers))
            return lhs, rhs
    elif which == 'dualside':
        if not alpha + l < n - j or (alpha > 0 and not alpha < n - k):
            raise DomainError(f"dualside relation needs alpha+l < n-j and alpha < n-k, "
                              f"got alpha={alpha} for {cfg}")
        used = constant('semyanistyi_dualside', cfg)
        candidates = {'semyanistyi_dualside': used}

        def compute():
            transformed = settings.tab(strichartz_forward_profile(f, cfg, spec))
            if alpha == 0:
                lhs = dual_kplane_radial(transformed, n, k, probes, spec)
            else:
                lhs = semyanistyi_dual_radial(transformed, n, k, alpha, probes, spec, grid,
                                              workers)
            rhs = used * np.atleast_1d(
                semyanistyi_dual_radial(f, n, j, alpha + l, probes, spec, grid, workers))
            return lhs, rhs
    else:
        raise DomainError(f"which must be 'forwardside' or 'dualside', got {which!r}")

    return _evaluate(f'semyanistyi-{which}', cfg, probes, settings.tolerance('double'),
                     {'alpha': alpha, 'profile': f.label}, compute,
                     constant_used=used, constant_candidates=candidates)


# Fuglede-type formula and inversion on the range of R_j

def _riesz_order(cfg: GrassmannConfig, alpha: float, beta: float) -> float:
    if cfg.j + cfg.l != cfg.k + cfg.q:
        raise DomainError(f"j+l and k+q differ for {cfg}")
    order = alpha + beta + cfg.j + cfg.l
    if not order < cfg.n:
        raise DomainError(f"Riesz order alpha+beta+j+l = {order:g} must be below n = {cfg.n}")
    return order


def _range_profile(h: RadialProfile, cfg: GrassmannConfig, alpha: float,
                   settings: CheckSettings) -> RadialProfile:
    """P^α_j h (R_j h for α = 0), tabulated."""
    if alpha == 0:
        return settings.tab(kplane_profile(h, cfg.n, cfg.j, settings.spec))
    return settings.tab(semyanistyi_profile(h, cfg.n, cfg.j, alpha, settings.spec,
                                            settings.grid, settings.workers))


def check_fuglede(h: RadialProfile, cfg: GrassmannConfig, alpha: float = 0.0, beta: float = 0.0,
                  settings: CheckSettings = DEFAULT_SETTINGS) -> IdentityReport:
    """P^{β*}_k R^k_{p,q} P^α_j h = c I^{α+β+j+l}_n h (P^0 read as R)."""
    if alpha < 0 or beta < 0:
        raise DomainError(f"alpha and beta must be nonnegative, got ({alpha}, {beta})")
    order = _riesz_order(cfg, alpha, beta)
    n, j, k = cfg.n, cfg.j, cfg.k
    if alpha > 0 and not alpha < n - j:
        raise DomainError(f"alpha must be below n-j = {n - j}, got {alpha}")
    if beta > 0 and not beta < n - k:
        raise DomainError(f"beta must be below n-k = {n - k}, got {beta}")
    used = constant('fuglede_c', cfg)
    candidates = {'fuglede_c': used, 'fuglede_c_alt': constant('fuglede_c_alt', cfg)}
    probes = settings.probes
    spec = settings.spec

    def compute():
        inner = _range_profile(h, cfg, alpha, settings)
        transformed = settings.tab(strichartz_forward_profile(inner, cfg, spec))
        if beta == 0:
            lhs = dual_kplane_radial(transformed, n, k, probes, spec)
        else:
            lhs = semyanistyi_dual_radial(transformed, n, k, beta, probes, spec,
                                          settings.grid, settings.workers)
        rhs = used * np.atleast_1d(riesz_radial(h, order, n, probes, spec=spec))
        return lhs, rhs

    return _evaluate('fuglede', cfg, probes, settings.tolerance('double'),
                     {'alpha': alpha, 'beta': beta, 'order': order, 'profile': h.label},
                     compute, constant_used=used, constant_candidates=candidates)


def invert_via_range(h: RadialProfile, cfg: GrassmannConfig, alpha: float = 0.0,
                     settings: CheckSettings = DEFAULT_SETTINGS,
                     side: str = 'forward') -> IdentityReport:
    """Recover f = R_j h from R^k_{p,q} f through

        f = c^{-1} R_j 𝔻^{α+j+l}_n R_k^* I^α_{n-k} R^k_{p,q} f,

    𝔻 the radial Riesz derivative and I^0 the identity.  side='dual' runs
    the same recovery for the dual transform, f = R_k h on k-planes.
    """
    if side not in ('forward', 'dual'):
        raise DomainError(f"side must be 'forward' or 'dual', got {side!r}")
    effective = cfg if side == 'forward' else cfg.swapped()
    n, j, k = effective.n, effective.j, effective.k
    if alpha < 0 or (alpha > 0 and not alpha < n - k):
        raise DomainError(f"alpha must be 0 or in (0, n-k) = (0, {n - k}), got {alpha}")
    order = _riesz_order(effective, 0.0, alpha)
    c = constant('fuglede_c', effective)
    probes = np.asarray(settings.probes, dtype=float)
    spec = settings.spec
    recovery_radii = np.geomspace(probes.min() / 8.0, probes.max() * 4.0, 96)

    def compute():
        f = _range_profile(h, effective, 0.0, settings)
        transformed = settings.tab(strichartz_forward_profile(f, effective, spec))
        if alpha > 0:
            transformed = settings.tab(riesz_profile(transformed, alpha, n - k, spec=spec))
        averaged = settings.tab(dual_kplane_profile(transformed, n, k, spec))
        recovered_h = riesz_inverse_radial(averaged, order, n, recovery_radii, spec,
                                           settings.grid, settings.workers).scaled(1.0 / c)
        lhs = kplane_radial(recovered_h, n, j, probes, spec)
        rhs = kplane_radial(h, n, j, probes, spec)
        return lhs, rhs

    name = 'invert-via-range' if side == 'forward' else 'invert-via-range-dual'
    return _evaluate(name, cfg, probes.tolist(),
                     settings.tolerance('pipeline'),
                     {'alpha': alpha, 'order': order, 'profile': h.label, 'side': side},
                     compute)


# standard suite

def _midpoint(low: float, high: float) -> float:
    return 0.5 * (low + high)


def _suite_checks(cfg: GrassmannConfig, kind: str,
                  settings: CheckSettings) -> List[Tuple[str, Callable[[], IdentityReport]]]:
    n, j, k, l, q = cfg.n, cfg.j, cfg.k, cfg.l, cfg.q
    alpha = cfg.ell / 2.0
    if kind == 'gaussian':
        g = RadialProfile.gaussian()
        lam1 = _midpoint(*_duality_window(cfg, 1))
        lam2 = _midpoint(*_duality_window(cfg, 2))
        return [
            ('intertwining', lambda: check_intertwining(g, cfg, alpha, settings)),
            ('weighted-duality-1', lambda: check_weighted_duality(g, cfg, lam1, 1, settings)),
            ('weighted-duality-2', lambda: check_weighted_duality(g, cfg, lam2, 2, settings)),
            ('weighted-duality-3', lambda: check_weighted_duality(g, cfg, None, 3, settings)),
            ('weighted-duality-4', lambda: check_weighted_duality(g, cfg, None, 4, settings)),
            ('semyanistyi-forwardside',
             lambda: check_semyanistyi(g, cfg, 0.0, 'forwardside', settings)),
            ('semyanistyi-dualside', lambda: check_semyanistyi(g, cfg, 0.0, 'dualside', settings)),
            ('fuglede', lambda: check_fuglede(g, cfg, 0.0, 0.0, settings)),
            ('invert-via-range', lambda: invert_via_range(g, cfg, 0.0, settings)),
            ('invert-via-range-dual',
             lambda: invert_via_range(g, cfg, 0.0, settings, side='dual')),
        ]
    if kind == 'power-law':
        # exponents in the middle of each identity's window; scale-free profiles
        # make the weighted duality integrals and the range inversion infinite
        lam_int = _midpoint(l + alpha, n - j)
        lam_fwd = _midpoint(j + l, n)
        lam_dual = _midpoint(l, n - j)
        return [
            ('intertwining',
             lambda: check_intertwining(RadialProfile.power_law(lam_int), cfg, alpha, settings)),
            ('semyanistyi-forwardside',
             lambda: check_semyanistyi(RadialProfile.power_law(lam_fwd), cfg, 0.0,
                                       'forwardside', settings)),
            ('semyanistyi-dualside',
             lambda: check_semyanistyi(RadialProfile.power_law(lam_dual), cfg, 0.0,
                                       'dualside', settings)),
            ('fuglede',
             lambda: check_fuglede(RadialProfile.power_law(lam_fwd), cfg, 0.0, 0.0, settings)),
        ]
    raise DomainError(f"unknown suite profile {kind!r}; use one of {SUITE_PROFILES}")


def standard_suite(cfgs: Sequence[Tuple[int, int, int, int]] = DEFAULT_SUITE_CONFIGS,
                   profiles: Sequence[str] = SUITE_PROFILES,
                   settings: CheckSettings = DEFAULT_SETTINGS,
                   only: Optional[Sequence[str]] = None) -> List[IdentityReport]:
    """Run every identity on every (config, profile) pair.

    ``only`` restricts the run to the named identities.
    """
    reports = []
    for dims in cfgs:
        cfg = GrassmannConfig(*dims)
        for kind in profiles:
            for name, run in _suite_checks(cfg, kind, settings):
                if only and name not in only:
                    continue
                logger.info("suite: %s on %s with %s", name, cfg, kind)
                reports.append(run())
    return reports
