"""Radial Radon-type transforms between affine Grassmannians and their inverses."""

from radon.config import ExistenceMethod, ExistenceVerdict, GrassmannConfig
from radon.existence import (check_existence, counterexample_exponent, lp_existence_bound,
                             sharpness_probe)
from radon.inversion import strichartz_dual_invert_radial, strichartz_invert_radial
from radon.transforms import (consistency_audit, dual_kplane_profile, dual_kplane_radial,
                              fiber_integral, gonzalez_radial, inclusion_radial, kplane_direct,
                              kplane_profile, kplane_radial, normalization_direct,
                              normalization_factorized, semyanistyi_direct_radial,
                              semyanistyi_dual_radial,
                              semyanistyi_profile, semyanistyi_radial, strichartz_dual_profile,
                              strichartz_dual_radial, strichartz_forward_direct,
                              strichartz_forward_profile, strichartz_forward_radial)

__all__ = [
    'ExistenceMethod', 'ExistenceVerdict', 'GrassmannConfig',
    'check_existence', 'counterexample_exponent', 'lp_existence_bound', 'sharpness_probe',
    'strichartz_dual_invert_radial', 'strichartz_invert_radial',
    'consistency_audit', 'dual_kplane_profile', 'dual_kplane_radial', 'fiber_integral',
    'gonzalez_radial', 'inclusion_radial', 'kplane_direct', 'kplane_profile', 'kplane_radial',
    'normalization_direct', 'normalization_factorized', 'semyanistyi_direct_radial',
    'semyanistyi_dual_radial', 'semyanistyi_profile', 'semyanistyi_radial',
    'strichartz_dual_profile', 'strichartz_dual_radial', 'strichartz_forward_direct',
    'strichartz_forward_profile', 'strichartz_forward_radial',
]
