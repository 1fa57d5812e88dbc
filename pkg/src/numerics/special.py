"""Gamma-function helpers and sphere constants."""

import math
from typing import Iterable

import numpy as np
from scipy import special

from numerics.errors import DomainError


def gamma_ln(x: float) -> float:
    """Natural log of Γ(x) for x > 0.

    Args:
        x: Positive argument

    Returns:
        ln Γ(x)
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"gamma_ln requires a positive finite argument, got {x!r}")
    return float(special.gammaln(x))


def _is_pole(x: float) -> bool:
    return x <= 0.0 and float(x).is_integer()


def gamma_ratio(numerator: Iterable[float], denominator: Iterable[float],
                prefactor: float = 1.0) -> float:
    """Evaluate prefactor · ΠΓ(a_i) / ΠΓ(b_i) in log space.

    Negative non-integer arguments are allowed (Γ alternates sign there);
    poles raise DomainError naming the offending argument.

    Args:
        numerator: Arguments of the Γ factors above the bar
        denominator: Arguments of the Γ factors below the bar
        prefactor: Multiplicative constant

    Returns:
        The ratio as a float
    """
    log_value = 0.0
    sign = 1.0
    for where, args, direction in (('numerator', numerator, 1.0),
                                   ('denominator', denominator, -1.0)):
        for a in args:
            a = float(a)
            if _is_pole(a):
                raise DomainError(f"Gamma pole at {a:g} in the {where}")
            log_value += direction * float(special.gammaln(a))
            sign *= float(special.gammasgn(a))
    return prefactor * sign * math.exp(log_value)


def sphere_area(m: float) -> float:
    """Area σ_{m-1} of the unit sphere in R^m; σ_0 = 2."""
    if m < 1:
        raise DomainError(f"sphere_area needs ambient dimension >= 1, got {m}")
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


def riesz_normalization(d: int, alpha: float) -> float:
    """γ_d(α) = 2^α π^{d/2} Γ(α/2) / Γ((d-α)/2)."""
    if not 0.0 < alpha < d:
        raise DomainError(f"Riesz order must satisfy 0 < alpha < d, got alpha={alpha}, d={d}")
    return gamma_ratio([alpha / 2.0], [(d - alpha) / 2.0],
                       prefactor=2.0 ** alpha * math.pi ** (d / 2.0))


def beta_function(a: float, b: float) -> float:
    return float(np.exp(special.betaln(a, b)))
