"""Radial profiles, Erdélyi–Kober operators and Riesz potentials."""

from fractional.erdelyi_kober import (derivative_branch, ek_derivative_minus,
                                      ek_derivative_plus, ek_minus, ek_minus_at_zero,
                                      ek_minus_profile, ek_plus,
                                      ek_plus_profile, left_inverse_deviation, semigroup_check)
from fractional.pipeline import derivative_chain
from fractional.profiles import (FracOrder, GridSpec, NodeCache, ProfileKind, RadialProfile,
                                 estimate_exponents, read_grid_csv, tabulate, write_grid_csv)
from fractional.riesz import (RieszBackend, calibrate_riesz_constant, riesz_ek_constant,
                              riesz_inverse_radial, riesz_power_coefficient, riesz_profile,
                              riesz_radial, riesz_semigroup_check)

__all__ = [
    'derivative_branch', 'ek_derivative_minus', 'ek_derivative_plus', 'ek_minus',
    'ek_minus_at_zero', 'ek_minus_profile', 'ek_plus', 'ek_plus_profile',
    'left_inverse_deviation',
    'semigroup_check', 'derivative_chain',
    'FracOrder', 'GridSpec', 'NodeCache', 'ProfileKind', 'RadialProfile', 'estimate_exponents',
    'read_grid_csv', 'tabulate', 'write_grid_csv',
    'RieszBackend', 'calibrate_riesz_constant', 'riesz_ek_constant', 'riesz_inverse_radial',
    'riesz_power_coefficient', 'riesz_profile', 'riesz_radial', 'riesz_semigroup_check',
]
