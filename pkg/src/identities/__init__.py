"""Closed-form constants and numerical verification of transform identities."""

from identities.checks import (DEFAULT_SETTINGS, DEFAULT_SUITE_CONFIGS, SUITE_PROFILES,
                               CheckSettings, check_fuglede, check_intertwining,
                               check_semyanistyi, check_weighted_duality,
                               invert_via_range, standard_suite)
from identities.constants import CONSTANTS, constant, constant_names
from identities.reports import (DEFAULT_PROBES, TOLERANCES, IdentityReport, Verdict,
                                build_report, fitted_ratio)

__all__ = [
    'DEFAULT_SETTINGS', 'DEFAULT_SUITE_CONFIGS', 'SUITE_PROFILES', 'CheckSettings',
    'check_fuglede', 'check_intertwining', 'check_semyanistyi', 'check_weighted_duality',
    'invert_via_range', 'standard_suite',
    'CONSTANTS', 'constant', 'constant_names',
    'DEFAULT_PROBES', 'TOLERANCES', 'IdentityReport', 'Verdict', 'build_report', 'fitted_ratio',
]
