"""Closed-form constants of the transform identities, by name.

    constant('c1', GrassmannConfig(6, 1, 1, 1), lam=2.0)   # 4.0

Every value goes through numerics.special.gamma_ratio, so a Γ pole raises
DomainError naming its location.
"""

import math
from typing import Callable, Dict, List, Optional, Tuple

from numerics.errors import DomainError
from numerics.special import gamma_ratio, riesz_normalization, sphere_area
from radon.config import GrassmannConfig


def _c1(cfg, lam, **_):
    n, j, k, l, q = cfg.n, cfg.j, cfg.k, cfg.l, cfg.q
    return gamma_ratio([(lam - l) / 2.0, (n - j - lam) / 2.0, (n - k) / 2.0],
                       [lam / 2.0, (n - q - lam) / 2.0, (n - k - q) / 2.0],
                       prefactor=math.pi ** (l / 2.0))


def _c2(cfg, lam, **_):
    n, j, k, l, q = cfg.n, cfg.j, cfg.k, cfg.l, cfg.q
    return gamma_ratio([(lam - q) / 2.0, (n - k - lam) / 2.0, (n - j) / 2.0],
                       [lam / 2.0, (n - l - lam) / 2.0, (n - j - l) / 2.0],
                       prefactor=math.pi ** (q / 2.0))


def _c3(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.k) / 2.0], [(cfg.n - cfg.p) / 2.0],
                       prefactor=math.pi ** (cfg.l / 2.0))


def _c4(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.j) / 2.0], [(cfg.n - cfg.p) / 2.0],
                       prefactor=math.pi ** (cfg.q / 2.0))


def _c_kn(n, k, **_):
    return gamma_ratio([n / 2.0], [(n - k) / 2.0], prefactor=2.0 ** k * math.pi ** (k / 2.0))


def _tilde_c1(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.k) / 2.0], [cfg.ell / 2.0],
                       prefactor=math.pi ** (cfg.l / 2.0))


def _tilde_c2(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.j) / 2.0], [cfg.ell / 2.0],
                       prefactor=math.pi ** (cfg.q / 2.0))


def _fuglede_c(cfg, **_):
    m = cfg.j + cfg.l
    return gamma_ratio([cfg.n / 2.0], [(cfg.n - m) / 2.0],
                       prefactor=2.0 ** m * math.pi ** (m / 2.0))


def _fuglede_c_alt(cfg, **_):
    # π((j+l)/2) read as a product rather than a power
    m = cfg.j + cfg.l
    return gamma_ratio([cfg.n / 2.0], [(cfg.n - m) / 2.0],
                       prefactor=2.0 ** m * math.pi * m / 2.0)


def _semyanistyi_dualside(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.j) / 2.0], [(cfg.n - cfg.j - cfg.l) / 2.0],
                       prefactor=2.0 ** cfg.l * math.pi ** (cfg.l / 2.0))


def _semyanistyi_forwardside(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.k) / 2.0], [(cfg.n - cfg.k - cfg.q) / 2.0],
                       prefactor=2.0 ** cfg.q * math.pi ** cfg.q)


def _semyanistyi_forwardside_alt(cfg, **_):
    return gamma_ratio([(cfg.n - cfg.k) / 2.0], [(cfg.n - cfg.k - cfg.q) / 2.0],
                       prefactor=2.0 ** cfg.q * math.pi ** (cfg.q / 2.0))


def _gamma_dk(d, alpha, **_):
    return riesz_normalization(d, alpha)


def _riesz_ek(alpha, **_):
    return 2.0 ** (-alpha)


def _sigma(d, **_):
    return sphere_area(d)


# name -> (formula, required parameters)
CONSTANTS: Dict[str, Tuple[Callable[..., float], Tuple[str, ...]]] = {
    'c1': (_c1, ('cfg', 'lam')),
    'c2': (_c2, ('cfg', 'lam')),
    'c3': (_c3, ('cfg',)),
    'c4': (_c4, ('cfg',)),
    'c_kn': (_c_kn, ('n', 'k')),
    'tilde_c1': (_tilde_c1, ('cfg',)),
    'tilde_c2': (_tilde_c2, ('cfg',)),
    'fuglede_c': (_fuglede_c, ('cfg',)),
    'fuglede_c_alt': (_fuglede_c_alt, ('cfg',)),
    'gamma_dk': (_gamma_dk, ('d', 'alpha')),
    'semyanistyi_dualside': (_semyanistyi_dualside, ('cfg',)),
    'semyanistyi_forwardside': (_semyanistyi_forwardside, ('cfg',)),
    'semyanistyi_forwardside_alt': (_semyanistyi_forwardside_alt, ('cfg',)),
    'riesz_ek': (_riesz_ek, ('alpha',)),
    'sigma': (_sigma, ('d',)),
}


def constant_names() -> List[str]:
    return sorted(CONSTANTS)


def constant(name: str, cfg: Optional[GrassmannConfig] = None, **params) -> float:
    """Evaluate the named constant.

    Args:
        name: One of constant_names()
        cfg: Configuration, for the constants that depend on (n, p, q, l)
        **params: lam, n, k, d or alpha as the formula requires

    Raises:
        DomainError: unknown name, missing parameter or a Γ pole
    """
    if name not in CONSTANTS:
        raise DomainError(f"unknown constant {name!r}; known: {', '.join(constant_names())}")
    formula, required = CONSTANTS[name]
    supplied = dict(params, cfg=cfg)
    missing = [key for key in required if supplied.get(key) is None]
    if missing:
        raise DomainError(f"constant {name!r} needs parameter(s): {', '.join(missing)}")
    return formula(**supplied)
