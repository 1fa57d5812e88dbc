"""Compositions of Erdélyi–Kober derivatives evaluated on radius grids.

Every inversion formula in the package has the shape

    c · D^{β}_{-,2} r^{b} D^{γ}_{+,2} r^{a} φ

and needs the intermediate D^{γ}_{+,2}(...) on the whole half-line, because
the right-sided derivative integrates up to infinity.  The intermediate is
therefore tabulated on a log grid and extended by power laws fitted at the
grid ends.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from fractional.erdelyi_kober import ek_derivative_minus, ek_derivative_plus
from fractional.profiles import (NEG_INF, FracOrder, GridSpec, ProfileKind, RadialProfile,
                                 estimate_exponents, roundoff_extent, tabulate)
from numerics.differentiation import step_width
from numerics.errors import QuadratureAccuracyError
from numerics.parallel import evaluate_with_fallback
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec

logger = logging.getLogger(__name__)

# tabulated values below this fraction of the peak count as numerically zero
NOISE_FLOOR = 1e-7
# values must exceed their estimated roundoff by this factor to be fitted
NOISE_MARGIN = 1e3


def _finite_grid(radii: np.ndarray, results: dict, label: str) -> tuple:
    values = results['values']
    keep = np.isfinite(values)
    if keep.sum() < 2:
        raise QuadratureAccuracyError(
            f"{label}: only {int(keep.sum())} of {radii.size} radii could be evaluated; "
            f"first error: {results['errors'][0] if results['errors'] else 'none'}")
    return radii[keep], values[keep]


def _above_noise(radii: np.ndarray, values: np.ndarray, source: np.ndarray,
                 order: float, accuracy: float) -> int:
    """Grid values to keep before the tail drowns in the input's roundoff.

    A left-sided derivative of order γ divides its input by roughly r^{2γ},
    so its absolute error is about accuracy · |input| · r^{-2γ}.
    """
    noise = NOISE_MARGIN * accuracy * np.abs(source) * radii ** (-2.0 * order)
    drowned = np.flatnonzero(~(np.abs(values) > noise))
    drowned = drowned[drowned >= radii.size // 2]
    return int(drowned[0]) if drowned.size else radii.size


def trusted_interval(grid: GridSpec, plus_order: float, minus_order: float,
                     accuracy: float) -> tuple:
    """Part of the internal grid whose derivatives never reach past its ends."""
    plus_steps = FracOrder(plus_order).m + 1 if plus_order > 0 else 0
    minus_steps = FracOrder(minus_order).m + 1 if minus_order > 0 else 0
    widest = max(plus_steps, minus_steps)
    lo = grid.t_min + step_width(grid.t_min, widest, accuracy)
    hi = grid.t_max - step_width(grid.t_max, widest, accuracy)
    return lo, hi


def derivative_chain(phi: RadialProfile, radii: Sequence[float], *, pre_power: float,
                     plus_order: float, mid_power: float, minus_order: float,
                     constant: float, spec: QuadratureSpec = DEFAULT_SPEC,
                     grid: GridSpec = GridSpec(), workers: Optional[int] = None,
                     label: str = 'inverse') -> RadialProfile:
    """Evaluate c · D^{minus}_{-,2} r^{mid} D^{plus}_{+,2} r^{pre} φ at ``radii``.

    Either order may be 0, which skips that stage.  Composite inputs are
    tabulated on ``grid`` first.

    Returns:
        Grid profile on the radii that evaluated successfully.  Its metadata
        holds 'requested_radii', 'values' (NaN where a radius failed),
        'errors', 'trusted_interval', 'method' and the fitted exponents.
    """
    radii = np.asarray(radii, dtype=float)
    internal = grid.radii()
    source = phi
    if phi.kind is ProfileKind.COMPOSITE:
        logger.info("%s: tabulating input on %d radii", label, internal.size)
        source = tabulate(phi, grid, workers=workers)
    stage = source.times_power(pre_power)
    method = 'analytic-exponent'
    fitted = {}

    if plus_order > 0:
        logger.info("%s: left-sided derivative of order %g on the internal grid",
                    label, plus_order)
        results = evaluate_with_fallback(
            lambda r: ek_derivative_plus(stage, plus_order, r, spec), internal, workers)
        kept_radii, kept_values = _finite_grid(internal, results, label)
        head, tail = estimate_exponents(kept_radii, kept_values, floor=NOISE_FLOOR)
        extent = roundoff_extent(kept_radii, kept_values)
        if extent < kept_radii.size:
            # the intermediate decays faster than any power; past the cut it is roundoff
            logger.info("%s: intermediate reaches roundoff at r = %.3g, tail cut there",
                        label, kept_radii[extent - 1])
            kept_radii, kept_values = kept_radii[:extent], kept_values[:extent]
            tail = NEG_INF
        else:
            source_values = np.atleast_1d(stage(kept_radii))
            extent = _above_noise(kept_radii, kept_values, source_values, plus_order,
                                  max(stage.accuracy, spec.rel_tol))
            if extent < kept_radii.size:
                # the power-law extrapolation replaces the drowned tail
                logger.info("%s: intermediate below roundoff beyond r = %.3g, tail refitted",
                            label, kept_radii[extent - 1])
                kept_radii, kept_values = kept_radii[:extent], kept_values[:extent]
                head, tail = estimate_exponents(kept_radii, kept_values, floor=NOISE_FLOOR)
        fitted = {'intermediate_head': head, 'intermediate_tail': tail}
        method = 'numeric-growth'
        stage = RadialProfile.from_grid(kept_radii, kept_values, head, tail,
                                        interpolation='spline',
                                        accuracy=max(stage.accuracy, spec.rel_tol) * 1e3,
                                        label=f'{label}:intermediate')
    stage = stage.times_power(mid_power)

    if minus_order > 0:
        logger.info("%s: right-sided derivative of order %g at %d radii",
                    label, minus_order, radii.size)
        results = evaluate_with_fallback(
            lambda r: constant * np.atleast_1d(ek_derivative_minus(stage, minus_order, r, spec)),
            radii, workers)
    else:
        results = evaluate_with_fallback(lambda r: constant * np.atleast_1d(stage(r)),
                                         radii, workers)
    kept_radii, kept_values = _finite_grid(radii, results, label)
    head, tail = estimate_exponents(kept_radii, kept_values, floor=NOISE_FLOOR)
    metadata = {
        'requested_radii': radii.tolist(),
        'values': results['values'].tolist(),
        'errors': results['errors'],
        'trusted_interval': trusted_interval(grid, plus_order, minus_order,
                                             max(stage.accuracy, spec.rel_tol)),
        'method': method,
        **fitted,
    }
    if results['errors']:
        logger.warning("%s: %d radii failed", label, len(results['errors']))
    return RadialProfile.from_grid(kept_radii, kept_values, head, tail,
                                   interpolation='pchip', accuracy=1e-6, label=label,
                                   metadata=metadata)
