"""Recovering radial f₀ from its Strichartz transform.

    f₀ = c̃₁^{-1} D^{l/2}_{-,2} r^{2-ℓ} D^{q/2}_{+,2} s^{n-k-2} φ,   φ = R^k_{p,q} f

The dual inverse is the same chain for the configuration with q and l
exchanged.
"""

import logging
from typing import Optional, Sequence

from fractional.pipeline import derivative_chain
from fractional.profiles import GridSpec, RadialProfile
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec
from radon.config import GrassmannConfig
from radon.transforms import normalization_factorized

logger = logging.getLogger(__name__)


def strichartz_invert_radial(phi: RadialProfile, cfg: GrassmannConfig, radii: Sequence[float],
                             spec: QuadratureSpec = DEFAULT_SPEC, grid: GridSpec = GridSpec(),
                             workers: Optional[int] = None) -> RadialProfile:
    """Left inverse of strichartz_forward_radial, evaluated at ``radii``.

    Args:
        phi: Transform values (a closed form, composite or grid profile)
        cfg: Configuration that produced ``phi``
        radii: Radii at which f₀ is recovered
        spec: Quadrature tolerances of the inner fractional integrals
        grid: Internal grid for the intermediate left-sided derivative
        workers: Thread count for grid evaluation

    Returns:
        Grid profile of f₀; metadata carries per-radius errors and the
        trusted interval of the internal grid
    """
    logger.info("inverting %s for %s on %d radii", phi.label, cfg, len(radii))
    return derivative_chain(phi, radii, pre_power=cfg.n - cfg.k - 2.0,
                            plus_order=cfg.q / 2.0, mid_power=2.0 - cfg.ell,
                            minus_order=cfg.l / 2.0,
                            constant=1.0 / normalization_factorized(cfg),
                            spec=spec, grid=grid, workers=workers,
                            label=f'inverse{cfg}[{phi.label}]')


def strichartz_dual_invert_radial(psi: RadialProfile, cfg: GrassmannConfig,
                                  radii: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC,
                                  grid: GridSpec = GridSpec(),
                                  workers: Optional[int] = None) -> RadialProfile:
    """Left inverse of strichartz_dual_radial (constant c̃₂)."""
    return strichartz_invert_radial(psi, cfg.swapped(), radii, spec, grid, workers)
