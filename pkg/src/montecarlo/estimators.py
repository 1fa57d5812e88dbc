"""Monte Carlo estimators of R^k_{p,q}, its dual and the duality pairing.

For a k-plane ζ = (η, v) the transform is

    (R^k_{p,q} f)(ζ) = ∫_{G_q(η^⊥)} ∫_{G_p(η)} ∫_{P^⊥∩η} f([P, Q] + u + v) du dP dQ

with probability measures on the two Grassmannians.  One sample draws P and
Q uniformly and u from an isotropic proposal on the l-dimensional fiber
P^⊥∩η; its value is f(τ)/π(u) for the j-plane τ = [P, Q] + u + v.  The
plane τ has direction span(P ∪ Q) and offset u + v - Pr_Q v.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from fractional.profiles import RadialProfile
from montecarlo.grassmann import AffinePlane, check_rotation, sample_frames
from montecarlo.streams import DEFAULT_STREAMS, fresh_seed, run_streams
from numerics.errors import DomainError
from numerics.quadrature import DEFAULT_SPEC, QuadratureSpec
from radon.config import GrassmannConfig
from radon.transforms import (fiber_integral, strichartz_dual_profile,
                              strichartz_forward_profile, strichartz_forward_radial)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100_000
# effective sample size below this fraction of N flags weight degeneracy
ESS_WARNING_FRACTION = 0.01
# deterministic references and near-exact estimates agree to this relative accuracy at best
REFERENCE_REL_ACCURACY = 1e-8
_MIN_PROPOSAL_SCALE = 1e-12

Rotations = Tuple[Optional[np.ndarray], Optional[np.ndarray]]


@dataclass(frozen=True)
class PlaneFunction:
    """f(ξ, u) = f₀(|u|)·m(ξ, u) on affine planes, vectorized over samples.

    ``modulation`` maps (offsets (N, n), frames (N, n, dim)) to N factors;
    None means f is radial.
    """
    profile: RadialProfile
    modulation: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    label: str = ''

    @classmethod
    def radial(cls, profile: RadialProfile) -> 'PlaneFunction':
        return cls(profile, None, profile.label)

    @classmethod
    def direction_modulated(cls, profile: RadialProfile, axis: Sequence[float],
                            strength: float = 1.0) -> 'PlaneFunction':
        """f₀(|u|)·exp(-strength·|ξᵀa|²): a Gaussian weight on how far the
        plane direction ξ leans towards the axis a."""
        axis = np.asarray(axis, dtype=float)
        strength = float(strength)

        def modulation(offsets, frames):
            lean = np.einsum('snd,n->sd', frames, axis)
            return np.exp(-strength * np.sum(lean * lean, axis=1))

        return cls(profile, modulation, f'{profile.label}*exp(-{strength:g}|xi.a|^2)')

    @property
    def is_zero(self) -> bool:
        return self.profile.is_zero

    def __call__(self, offsets: np.ndarray, frames: np.ndarray) -> np.ndarray:
        values = np.asarray(self.profile(np.linalg.norm(offsets, axis=1)), dtype=float)
        if self.modulation is not None:
            values = values * self.modulation(offsets, frames)
        return values


PlaneLike = Union[PlaneFunction, RadialProfile]


def as_plane_function(f: PlaneLike) -> PlaneFunction:
    return f if isinstance(f, PlaneFunction) else PlaneFunction.radial(f)


class ProposalKind(Enum):
    GAUSSIAN = 'gaussian'
    STUDENT_T = 'student-t'


@dataclass(frozen=True)
class OffsetProposal:
    """Isotropic proposal for offsets in a fiber of dimension ``dim``.

    The scale may vary per sample: for a power-law profile it follows the
    distance a already fixed by the other coordinates, so that f/π stays
    bounded.  The Student-t degrees of freedom give finite variance when f
    decays like |u|^τ with τ < -dim.
    """
    kind: ProposalKind
    dim: int
    base_scale: float
    df: Optional[float] = None
    follows_distance: bool = False

    @classmethod
    def for_profile(cls, profile: RadialProfile, dim: int
                    ) -> Tuple['OffsetProposal', Optional[str]]:
        """Proposal matched to the profile's decay, plus a divergence warning."""
        if profile.decays_exponentially or profile.is_zero:
            return cls(ProposalKind.GAUSSIAN, dim, profile.scale / np.sqrt(2.0)), None
        warning = None
        df = -profile.tail_exponent - dim
        if df <= 0:
            warning = (f"divergence: {profile.label} decays like t^{profile.tail_exponent:g}, "
                       f"not integrable over a {dim}-dimensional fiber")
            logger.warning(warning)
            df = 1.0
        base = 0.0 if profile.is_scale_free else profile.scale
        return cls(ProposalKind.STUDENT_T, dim, base, df, follows_distance=True), warning

    def scales(self, distance: np.ndarray) -> np.ndarray:
        if not self.follows_distance:
            return np.full(distance.shape, self.base_scale)
        return np.maximum(np.hypot(distance, self.base_scale), _MIN_PROPOSAL_SCALE)

    def _standard(self):
        zeros, eye = np.zeros(self.dim), np.eye(self.dim)
        if self.kind is ProposalKind.GAUSSIAN:
            return stats.multivariate_normal(mean=zeros, cov=eye)
        return stats.multivariate_t(loc=zeros, shape=eye, df=self.df)

    def draw(self, rng: np.random.Generator, scales: np.ndarray
             ) -> Tuple[np.ndarray, np.ndarray]:
        """Offsets of shape (N, dim) and their log proposal densities."""
        size = scales.shape[0]
        if self.dim == 0:
            return np.zeros((size, 0)), np.zeros(size)
        standard = self._standard()
        z = np.reshape(standard.rvs(size=size, random_state=rng), (size, self.dim))
        log_density = np.reshape(standard.logpdf(z), size) - self.dim * np.log(scales)
        return z * scales[:, None], log_density


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with standard error sd/√N."""
    mean: float
    stderr: float
    n_samples: int
    seed: int
    effective_sample_size: float
    warning: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_values(cls, values: np.ndarray, seed: int, warning: Optional[str] = None,
                    metadata: Optional[Dict[str, Any]] = None) -> 'MCEstimate':
        values = np.asarray(values, dtype=float)
        n = values.size
        mean = float(np.mean(values))
        stderr = float(np.std(values, ddof=1) / np.sqrt(n))
        magnitude = np.abs(values)
        total = float(np.sum(magnitude * magnitude))
        ess = float(np.sum(magnitude) ** 2 / total) if total > 0 else float(n)
        if ess < ESS_WARNING_FRACTION * n:
            degenerate = f"weight degeneracy: effective sample size {ess:.1f} of {n}"
            logger.warning(degenerate)
            warning = degenerate if warning is None else f"{warning}; {degenerate}"
        if not np.isfinite(mean):
            warning = '; '.join(filter(None, [warning, "non-finite sample values"]))
        return cls(mean, stderr, n, int(seed), ess, warning, dict(metadata or {}))

    def z_score(self, reference: float) -> float:
        """(mean - reference) in units of the standard error.

        The standard error is floored at REFERENCE_REL_ACCURACY times the
        reference, so estimators with (almost) no variance are compared
        relatively.
        """
        reference = float(reference)
        difference = self.mean - reference
        spread = np.hypot(self.stderr, REFERENCE_REL_ACCURACY * abs(reference))
        if spread == 0.0:
            return 0.0 if difference == 0.0 else float('inf')
        return float(difference / spread)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'mean': self.mean,
            'stderr': self.stderr,
            'n_samples': self.n_samples,
            'seed': self.seed,
            'effective_sample_size': self.effective_sample_size,
            'warning': self.warning,
        }


def combined_z(a: MCEstimate, b: MCEstimate) -> float:
    """(a - b) in units of the combined standard error."""
    difference = a.mean - b.mean
    scale = REFERENCE_REL_ACCURACY * max(abs(a.mean), abs(b.mean))
    spread = np.hypot(np.hypot(a.stderr, b.stderr), scale)
    if spread == 0.0:
        return 0.0 if difference == 0.0 else float('inf')
    return float(difference / spread)


def _transform_samples(f: PlaneFunction, rng: np.random.Generator, size: int,
                       eta: np.ndarray, eta_perp: np.ndarray, v: np.ndarray, p: int, q: int,
                       proposal: OffsetProposal, rotations: Rotations = (None, None)
                       ) -> np.ndarray:
    """Importance-weighted values f(τ)/π(u) for ``size`` sampled (P, Q, u).

    ``eta``/``eta_perp`` are frames of η and η^⊥, either fixed (n, ·) or one
    per sample (size, n, ·); ``v`` likewise (n,) or (size, n).
    """
    k, m = eta.shape[-1], eta_perp.shape[-1]
    rot_eta, rot_perp = rotations
    a, fiber = sample_frames(rng, size, k, p)
    if rot_eta is not None:
        a, fiber = rot_eta @ a, rot_eta @ fiber
    b, _ = sample_frames(rng, size, m, q)
    if rot_perp is not None:
        b = rot_perp @ b

    big_p = eta @ a
    fiber_basis = eta @ fiber
    big_q = eta_perp @ b
    n = big_p.shape[1]
    v = np.broadcast_to(v, (size, n))
    along_q = np.einsum('snq,sq->sn', big_q, np.einsum('snq,sn->sq', big_q, v))
    v_perp = v - along_q

    w, log_density = proposal.draw(rng, proposal.scales(np.linalg.norm(v_perp, axis=1)))
    offsets = v_perp + np.einsum('snl,sl->sn', fiber_basis, w)
    frames = np.concatenate([big_p, big_q], axis=2)
    with np.errstate(over='ignore', invalid='ignore'):
        return f(offsets, frames) * np.exp(-log_density)


def _check_plane(plane: AffinePlane, n: int, dim: int, what: str) -> None:
    if plane.direction.ambient_dim != n or plane.dim != dim:
        raise DomainError(f"{what} must be a {dim}-plane in R^{n}, got a {plane.dim}-plane "
                          f"in R^{plane.direction.ambient_dim}")


def mc_strichartz(f: PlaneLike, zeta: AffinePlane, cfg: GrassmannConfig,
                  n_samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None,
                  streams: int = DEFAULT_STREAMS, workers: Optional[int] = None,
                  rotations: Optional[Rotations] = None, stream_key: int = 0) -> MCEstimate:
    """Unbiased estimate of (R^k_{p,q} f)(ζ).

    Args:
        f: Function on affine j-planes (a RadialProfile means f(τ) = f₀(|τ|))
        zeta: The k-plane ζ = (η, v)
        cfg: Configuration (n, p, q, l)
        n_samples: Number of samples
        seed: Root seed; a fresh one is drawn and recorded when None
        streams: Number of random substreams
        workers: Threads evaluating the streams
        rotations: Fixed orthogonal matrices acting inside η (k×k) and
            η^⊥ ((n-k)×(n-k)) on every sampled frame
        stream_key: Separates estimators sharing one seed

    Returns:
        MCEstimate; ``warning`` reports a fiber integral that does not
        converge or degenerate importance weights
    """
    f = as_plane_function(f)
    _check_plane(zeta, cfg.n, cfg.k, 'zeta')
    seed = fresh_seed() if seed is None else int(seed)
    rot_eta, rot_perp = rotations or (None, None)
    rotations = (check_rotation(rot_eta, cfg.k, 'eta'),
                 check_rotation(rot_perp, cfg.n - cfg.k, 'eta-perp'))
    if f.is_zero:
        return MCEstimate(0.0, 0.0, int(n_samples), seed, float(n_samples))

    proposal, warning = OffsetProposal.for_profile(f.profile, cfg.l)
    eta = zeta.direction.frame
    eta_perp = zeta.direction.complement().frame

    def sampler(rng, size):
        return _transform_samples(f, rng, size, eta, eta_perp, zeta.offset, cfg.p, cfg.q,
                                  proposal, rotations)

    values = run_streams(sampler, n_samples, seed, stream_key, streams, workers)
    estimate = MCEstimate.from_values(values, seed, warning, {'distance': zeta.distance})
    logger.debug("R%s at |zeta|=%g: %.6g ± %.2g", cfg, zeta.distance, estimate.mean,
                 estimate.stderr)
    return estimate


def mc_strichartz_dual(g: PlaneLike, tau: AffinePlane, cfg: GrassmannConfig,
                       n_samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None,
                       streams: int = DEFAULT_STREAMS, workers: Optional[int] = None,
                       rotations: Optional[Rotations] = None, stream_key: int = 0
                       ) -> MCEstimate:
    """Estimate of (R^j_{p,l} g)(τ) for g on k-planes and a j-plane τ.

    Same construction with (q, l) and (j, k) exchanged.
    """
    _check_plane(tau, cfg.n, cfg.j, 'tau')
    return mc_strichartz(g, tau, cfg.swapped(), n_samples, seed, streams, workers, rotations,
                         stream_key)


def _outer_proposal(profile: RadialProfile, dim: int, what: str) -> OffsetProposal:
    if not profile.decays_exponentially:
        raise DomainError(f"pairing estimates need an exponentially decaying {what}, "
                          f"got {profile.label}")
    proposal, _ = OffsetProposal.for_profile(profile, dim)
    return proposal


def _pairing_samples(inner: PlaneFunction, outer: RadialProfile, effective: GrassmannConfig,
                     outer_dim: int, inner_proposal: OffsetProposal,
                     outer_proposal: OffsetProposal):
    """Sampler of ⟨R inner, outer⟩ over the affine Grassmannian G(n, outer_dim)."""
    n = effective.n

    def sampler(rng, size):
        base, base_perp = sample_frames(rng, size, n, outer_dim)
        w, log_density = outer_proposal.draw(rng, outer_proposal.scales(np.zeros(size)))
        offsets = np.einsum('snm,sm->sn', base_perp, w)
        weights = np.asarray(outer(np.linalg.norm(w, axis=1)), dtype=float) * np.exp(-log_density)
        inner_values = _transform_samples(inner, rng, size, base, base_perp, offsets,
                                          effective.p, effective.q, inner_proposal)
        return weights * inner_values

    return sampler


def mc_pairing_duality(f: RadialProfile, g: RadialProfile, cfg: GrassmannConfig,
                       n_samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None,
                       streams: int = DEFAULT_STREAMS, workers: Optional[int] = None,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> Dict[str, Any]:
    """Estimate ⟨R^k_{p,q} f, g⟩ and ⟨f, R^j_{p,l} g⟩ independently.

    Each sample draws a uniform plane direction, a Gaussian offset and one
    inner sample of the transform.  The deterministic references are the
    1-D reductions σ_{n-k-1} ∫ (R f)₀ g₀ t^{n-k-1} dt and
    σ_{n-j-1} ∫ f₀ (R* g)₀ t^{n-j-1} dt.

    Returns:
        Dict with 'forward' and 'dual' MCEstimates, 'reference' and
        'reference_dual', 'reference_agreement' (relative difference of the
        two references), 'z_pairings', 'z_forward' and 'z_dual'
    """
    seed = fresh_seed() if seed is None else int(seed)
    n, j, k = cfg.n, cfg.j, cfg.k
    if f.is_zero or g.is_zero:
        zero = MCEstimate(0.0, 0.0, int(n_samples), seed, float(n_samples))
        return {'forward': zero, 'dual': zero, 'reference': 0.0, 'reference_dual': 0.0,
                'reference_agreement': 0.0, 'z_pairings': 0.0, 'z_forward': 0.0,
                'z_dual': 0.0}

    swapped = cfg.swapped()
    forward_inner, forward_warning = OffsetProposal.for_profile(f, cfg.l)
    dual_inner, dual_warning = OffsetProposal.for_profile(g, cfg.q)
    forward_sampler = _pairing_samples(PlaneFunction.radial(f), g, cfg, k, forward_inner,
                                       _outer_proposal(g, n - k, 'g'))
    dual_sampler = _pairing_samples(PlaneFunction.radial(g), f, swapped, j, dual_inner,
                                    _outer_proposal(f, n - j, 'f'))

    forward = MCEstimate.from_values(run_streams(forward_sampler, n_samples, seed, 0, streams,
                                                 workers), seed, forward_warning)
    dual = MCEstimate.from_values(run_streams(dual_sampler, n_samples, seed, 1, streams,
                                              workers), seed, dual_warning)

    reference = fiber_integral(strichartz_forward_profile(f, cfg, spec), g, n - k, spec)
    reference_dual = fiber_integral(f, strichartz_dual_profile(g, cfg, spec), n - j, spec)
    agreement = abs(reference - reference_dual) / max(abs(reference), 1e-300)
    result = {
        'forward': forward,
        'dual': dual,
        'reference': reference,
        'reference_dual': reference_dual,
        'reference_agreement': agreement,
        'z_pairings': combined_z(forward, dual),
        'z_forward': forward.z_score(reference),
        'z_dual': dual.z_score(reference),
    }
    logger.info("pairings %s: forward %.6g ± %.2g, dual %.6g ± %.2g, reference %.10g",
                cfg, forward.mean, forward.stderr, dual.mean, dual.stderr, reference)
    return result


def mc_vs_radial(f: PlaneLike, cfg: GrassmannConfig, radii: Sequence[float],
                 n_samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None,
                 streams: int = DEFAULT_STREAMS, workers: Optional[int] = None,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> Dict[str, Any]:
    """Compare Monte Carlo estimates with the radial formula radius by radius.

    Returns:
        Dict with 'rows' (radius, mean, stderr, n_samples, radial, z,
        warning), 'max_abs_z' and 'seed'
    """
    f = as_plane_function(f)
    if f.modulation is not None:
        raise DomainError("mc_vs_radial compares against the radial formula; f must be radial")
    radii = [float(r) for r in radii]
    if any(not r > 0 for r in radii):
        raise DomainError("mc_vs_radial needs positive radii")
    seed = fresh_seed() if seed is None else int(seed)

    rows = []
    for index, radius in enumerate(radii):
        zeta = AffinePlane.standard(cfg.n, cfg.k, radius)
        estimate = mc_strichartz(f, zeta, cfg, n_samples, seed, streams, workers,
                                 stream_key=index)
        radial = float(strichartz_forward_radial(f.profile, cfg, radius, spec))
        rows.append({
            'radius': radius,
            'mean': estimate.mean,
            'stderr': estimate.stderr,
            'n_samples': estimate.n_samples,
            'radial': radial,
            'z': estimate.z_score(radial),
            'warning': estimate.warning,
        })
    max_abs_z = max((abs(row['z']) for row in rows), default=0.0)
    logger.info("mc-vs-radial %s on %d radii: max |z| = %.2f", cfg, len(rows), max_abs_z)
    return {'rows': rows, 'max_abs_z': max_abs_z, 'seed': seed}
