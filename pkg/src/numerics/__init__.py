"""Special functions, singular-endpoint quadrature and the operator D."""

from numerics.differentiation import apply_D, step_width
from numerics.errors import (ConfigError, DivergenceError, DomainError,
                             QuadratureAccuracyError, StrichartzError)
from numerics.quadrature import (DEFAULT_SPEC, NO_SINGULARITY, EndpointSingularity,
                                 QuadratureSpec, TailDecay, TailPolicy,
                                 integrate_singular, integrate_tail)
from numerics.special import (beta_function, gamma_ln, gamma_ratio,
                              riesz_normalization, sphere_area)

__all__ = [
    'apply_D', 'step_width',
    'ConfigError', 'DivergenceError', 'DomainError', 'QuadratureAccuracyError',
    'StrichartzError',
    'DEFAULT_SPEC', 'NO_SINGULARITY', 'EndpointSingularity', 'QuadratureSpec',
    'TailDecay', 'TailPolicy', 'integrate_singular', 'integrate_tail',
    'beta_function', 'gamma_ln', 'gamma_ratio', 'riesz_normalization', 'sphere_area',
]
