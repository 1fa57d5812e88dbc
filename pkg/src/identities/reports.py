"""Identity reports: two values per probe and a verdict.

A report passes when both sides agree to the tolerance.  When they differ
by a factor that is constant over the probes the verdict is
constant-mismatch and the fitted factor is reported, which separates a
wrong constant from a wrong identity.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# 8 log-spaced radii in [0.25, 4]
DEFAULT_PROBES = tuple(np.geomspace(0.25, 4.0, 8).tolist())

TOLERANCES = {
    'single': 1e-6,
    'double': 1e-4,
    'pipeline': 1e-2,
}

# relative size below which both sides count as zero
_ZERO_FLOOR = 1e-300


class Verdict(Enum):
    PASS = 'pass'
    CONSTANT_MISMATCH = 'constant-mismatch'
    FAIL = 'fail'


@dataclass
class IdentityReport:
    """Outcome of one identity check."""
    identity_name: str
    config: Dict[str, Any]
    probes: List[float]
    lhs_values: List[float]
    rhs_values: List[float]
    tolerance: float
    max_rel_dev: float
    fitted_constant_ratio: float
    verdict: Verdict
    parameters: Dict[str, Any] = field(default_factory=dict)
    constant_used: Optional[float] = None
    constant_candidates: Dict[str, float] = field(default_factory=dict)
    matched_constant: Optional[str] = None
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def as_dict(self) -> Dict[str, Any]:
        return {
            'identity': self.identity_name,
            'config': self.config,
            'parameters': self.parameters,
            'probes': self.probes,
            'lhs': self.lhs_values,
            'rhs': self.rhs_values,
            'tolerance': self.tolerance,
            'max_rel_dev': self.max_rel_dev,
            'fitted_constant_ratio': self.fitted_constant_ratio,
            'verdict': self.verdict.value,
            'constant_used': self.constant_used,
            'constant_candidates': self.constant_candidates,
            'matched_constant': self.matched_constant,
            'errors': self.errors,
        }


def fitted_ratio(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Least-squares c in lhs ≈ c·rhs; 1 when both sides vanish."""
    denominator = float(np.dot(rhs, rhs))
    if denominator == 0.0:
        return 1.0 if not np.any(lhs) else float('inf')
    return float(np.dot(lhs, rhs)) / denominator


def _relative_deviation(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = np.maximum(np.abs(rhs), _ZERO_FLOOR)
    deviation = np.where((lhs == 0.0) & (rhs == 0.0), 0.0, np.abs(lhs - rhs) / scale)
    return float(np.max(deviation)) if deviation.size else 0.0


def build_report(name: str, config: Mapping[str, Any], probes: Sequence[float],
                 lhs: Sequence[float], rhs: Sequence[float], tolerance: float,
                 parameters: Optional[Mapping[str, Any]] = None,
                 constant_used: Optional[float] = None,
                 constant_candidates: Optional[Mapping[str, float]] = None) -> IdentityReport:
    """Classify lhs against rhs (rhs already includes ``constant_used``).

    ``constant_candidates`` are alternative readings of the constant; the
    report names the one that agrees with constant_used times the fitted
    ratio.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    ratio = fitted_ratio(lhs, rhs)
    deviation = _relative_deviation(lhs, rhs)
    if deviation <= tolerance:
        verdict = Verdict.PASS
    elif np.isfinite(ratio) and ratio != 0.0 and _relative_deviation(lhs, ratio * rhs) <= tolerance:
        verdict = Verdict.CONSTANT_MISMATCH
    else:
        verdict = Verdict.FAIL

    matched = None
    candidates = dict(constant_candidates or {})
    if constant_used is not None and candidates and np.isfinite(ratio):
        fitted = constant_used * ratio
        for label, value in candidates.items():
            if abs(value - fitted) <= 10.0 * tolerance * abs(fitted):
                matched = label
                break

    report = IdentityReport(name, dict(config), [float(p) for p in probes], lhs.tolist(),
                            rhs.tolist(), tolerance, deviation, ratio, verdict,
                            parameters=dict(parameters or {}), constant_used=constant_used,
                            constant_candidates=candidates, matched_constant=matched)
    log = logger.info if verdict is Verdict.PASS else logger.warning
    log("%s %s: %s (max deviation %.3e, fitted ratio %.12g)", name,
        config.get('n', ''), verdict.value, deviation, ratio)
    return report


def failed_report(name: str, config: Mapping[str, Any], probes: Sequence[float],
                  tolerance: float, errors: Sequence[str],
                  parameters: Optional[Mapping[str, Any]] = None) -> IdentityReport:
    """Report for a check whose sides could not be evaluated."""
    nan = [float('nan')] * len(probes)
    logger.warning("%s: could not be evaluated: %s", name, '; '.join(errors))
    return IdentityReport(name, dict(config), [float(p) for p in probes], nan, list(nan),
                          tolerance, float('inf'), float('nan'), Verdict.FAIL,
                          parameters=dict(parameters or {}), errors=list(errors))
