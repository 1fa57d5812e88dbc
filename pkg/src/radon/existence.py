"""When does R^k_{p,q} f exist for radial f?

For f(τ) = f₀(|τ|) the transform is finite almost everywhere exactly when

    ∫_0^a |f₀(t)| t^{n-j-1} dt < ∞   and   ∫_a^∞ |f₀(t)| t^{l-1} dt < ∞,

and for the dual transform the weights are t^{n-k-1} and t^{q-1}.  Both
conditions are read off the declared exponents of the profile.
"""

import logging
import math
from typing import List, Sequence

import numpy as np

from fractional.profiles import ProfileKind, RadialProfile
from numerics.errors import DomainError
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_singular
from radon.config import ExistenceMethod, ExistenceVerdict, GrassmannConfig

logger = logging.getLogger(__name__)

FORWARD = 'forward'
DUAL = 'dual'


def _side(side: str) -> str:
    if side not in (FORWARD, DUAL):
        raise DomainError(f"side must be 'forward' or 'dual', got {side!r}")
    return side


def _weights(cfg: GrassmannConfig, side: str):
    """(head weight power, tail weight power) of the integrability conditions."""
    if side == FORWARD:
        return cfg.n - cfg.j - 1, cfg.l - 1
    return cfg.n - cfg.k - 1, cfg.q - 1


def check_existence(f: RadialProfile, cfg: GrassmannConfig,
                    side: str = FORWARD) -> ExistenceVerdict:
    """Head and tail verdicts for the forward (or dual) transform of ``f``.

    Closed-form and composed profiles are decided from their exponents;
    grid profiles from the exponents fitted to their end values.
    """
    side = _side(side)
    method = ExistenceMethod.NUMERIC if f.kind is ProfileKind.GRID else ExistenceMethod.ANALYTIC
    if f.is_zero:
        return ExistenceVerdict(True, True, method, side)
    head_weight, tail_weight = _weights(cfg, side)
    messages = []

    head_ok = f.head_exponent + head_weight > -1.0
    if not head_ok:
        messages.append(f"∫_0 |f₀| t^{head_weight} dt diverges: f₀ ~ t^{f.head_exponent:g} "
                        f"needs an exponent above {-1 - head_weight:g}")
    tail_ok = f.decays_exponentially or f.tail_exponent + tail_weight < -1.0
    if not tail_ok:
        messages.append(f"∫^∞ |f₀| t^{tail_weight} dt diverges: f₀ ~ t^{f.tail_exponent:g} "
                        f"needs an exponent below {-1 - tail_weight:g}")

    verdict = ExistenceVerdict(head_ok, tail_ok, method, side, messages)
    logger.debug("existence of %s transform of %s for %s: %s", side, f.label, cfg,
                 'ok' if verdict.ok else '; '.join(messages))
    return verdict


def lp_existence_bound(cfg: GrassmannConfig, side: str = FORWARD) -> float:
    """Sharp exponent s: R f exists for all f ∈ L^{s'} with s' < s.

    (n-j)/l for the forward transform, (n-k)/q for the dual.
    """
    side = _side(side)
    if side == FORWARD:
        if cfg.l == 0:
            raise DomainError(f"the forward bound (n-j)/l degenerates for l = 0 in {cfg}")
        return (cfg.n - cfg.j) / cfg.l
    if cfg.q == 0:
        raise DomainError(f"the dual bound (n-k)/q degenerates for q = 0 in {cfg}")
    return (cfg.n - cfg.k) / cfg.q


def counterexample_exponent(cfg: GrassmannConfig, s: float, side: str = FORWARD) -> float:
    """Exponent e of (2+t)^e / log(2+t), the L^s function whose transform diverges."""
    side = _side(side)
    if not s > 0:
        raise DomainError(f"Lebesgue exponent must be positive, got {s}")
    return ((cfg.j if side == FORWARD else cfg.k) - cfg.n) / s


def sharpness_probe(cfg: GrassmannConfig, s: float, cutoffs: Sequence[float],
                    side: str = FORWARD,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> List[float]:
    """Tail integral of the counterexample, truncated at each cutoff.

    Integrates (2+t)^e t^{w-1} / log(2+t) over [1, cutoff], with w = l
    (forward) or w = q (dual), in the variable u = log t.  For s at or above
    the sharp bound the values grow without bound; below it they converge.
    """
    side = _side(side)
    cutoffs = [float(c) for c in cutoffs]
    if not cutoffs or cutoffs[0] <= 1.0 or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise DomainError("cutoffs must be strictly increasing and greater than 1")
    exponent = counterexample_exponent(cfg, s, side)
    weight = cfg.l if side == FORWARD else cfg.q
    try:
        if s < lp_existence_bound(cfg, side):
            logger.info("s=%g is below the sharp bound; the probe should converge", s)
    except DomainError:
        pass
    log_two = math.log(2.0)

    def integrand(u):
        log_shift = np.logaddexp(log_two, u)
        with np.errstate(over='ignore'):
            return np.exp(exponent * log_shift + weight * u) / log_shift

    values = []
    running = 0.0
    lower = 0.0
    for cutoff in cutoffs:
        upper = math.log(cutoff)
        running += float(integrate_singular(integrand, lower, upper, spec=spec))
        values.append(running)
        lower = upper
    logger.debug("sharpness probe %s s=%g: %s", cfg, s, values)
    return values
