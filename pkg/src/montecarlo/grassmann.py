"""Subspaces, affine planes and rotation-invariant sampling of Grassmannians.

A uniform m-subspace of R^n is the column span of a standard normal n×m
matrix.  Orthonormalizing it with a QR factorization whose triangular factor
has a positive diagonal makes the frame a deterministic function of the draw,
so equal seeds give equal subspaces.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.linalg import null_space

from numerics.errors import DomainError

logger = logging.getLogger(__name__)

RngLike = Union[int, np.random.Generator, np.random.SeedSequence, None]

ORTHONORMAL_TOL = 1e-12
# |diag R| below this is treated as a rank-deficient draw
_RANK_FLOOR = 1e-10


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear m-subspace of R^n given by an orthonormal n×m frame."""
    ambient_dim: int
    dim: int
    frame: np.ndarray

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float).reshape(self.ambient_dim, self.dim)
        object.__setattr__(self, 'frame', frame)
        residual = np.max(np.abs(frame.T @ frame - np.eye(self.dim)), initial=0.0)
        if residual > ORTHONORMAL_TOL:
            raise DomainError(f"frame is not orthonormal (residual {residual:.2e})")

    @classmethod
    def coordinate(cls, n: int, m: int, start: int = 0) -> 'Subspace':
        """span(e_start, ..., e_{start+m-1})."""
        if start < 0 or start + m > n:
            raise DomainError(f"coordinate subspace e_{start}..e_{start + m - 1} not in R^{n}")
        return cls(n, m, np.eye(n)[:, start:start + m])

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.frame @ (self.frame.T @ np.asarray(x, dtype=float))

    def complement(self) -> 'Subspace':
        """Orthogonal complement in R^n."""
        if self.dim == 0:
            return Subspace(self.ambient_dim, self.ambient_dim, np.eye(self.ambient_dim))
        basis = null_space(self.frame.T)
        return Subspace(self.ambient_dim, basis.shape[1], basis)

    def rotated(self, rotation: np.ndarray) -> 'Subspace':
        return Subspace(self.ambient_dim, self.dim, np.asarray(rotation) @ self.frame)


@dataclass(frozen=True, eq=False)
class AffinePlane:
    """Plane direction + offset, offset orthogonal to the direction."""
    direction: Subspace
    offset: np.ndarray

    def __post_init__(self):
        offset = np.asarray(self.offset, dtype=float).reshape(self.direction.ambient_dim)
        object.__setattr__(self, 'offset', offset)
        leak = np.max(np.abs(self.direction.frame.T @ offset), initial=0.0)
        if leak > ORTHONORMAL_TOL * max(1.0, float(np.linalg.norm(offset))):
            raise DomainError(f"offset is not orthogonal to the direction ({leak:.2e})")

    @classmethod
    def standard(cls, n: int, k: int, distance: float) -> 'AffinePlane':
        """span(e_1..e_k) shifted by distance·e_{k+1}."""
        if k >= n:
            raise DomainError(f"a {k}-plane in R^{n} has no room for an offset")
        offset = np.zeros(n)
        offset[k] = float(distance)
        return cls(Subspace.coordinate(n, k), offset)

    @property
    def dim(self) -> int:
        return self.direction.dim

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.offset))


def sample_frames(rng: np.random.Generator, size: int, n: int, m: int
                  ) -> Tuple[np.ndarray, np.ndarray]:
    """Batch of uniform m-subspaces of R^n and their complements.

    Returns (frames, complements) with shapes (size, n, m) and
    (size, n, n-m).  Complement bases come from the same complete QR
    factorization.
    """
    if not 0 <= m <= n:
        raise DomainError(f"need 0 <= m <= n, got m={m}, n={n}")
    if m == 0:
        return np.zeros((size, n, 0)), np.broadcast_to(np.eye(n), (size, n, n)).copy()
    z = rng.standard_normal((size, n, m))
    q, r = np.linalg.qr(z, mode='complete')
    diag = np.diagonal(r[:, :m, :], axis1=1, axis2=2)
    bad = np.flatnonzero(np.min(np.abs(diag), axis=1) < _RANK_FLOOR)
    while bad.size:
        logger.debug("resampling %d rank-deficient draws", bad.size)
        q_new, r_new = np.linalg.qr(rng.standard_normal((bad.size, n, m)), mode='complete')
        q[bad], r[bad] = q_new, r_new
        diag = np.diagonal(r[:, :m, :], axis1=1, axis2=2)
        bad = np.flatnonzero(np.min(np.abs(diag), axis=1) < _RANK_FLOOR)
    q[:, :, :m] *= np.sign(diag)[:, None, :]
    return q[:, :, :m], q[:, :, m:]


def sample_grassmann(n: int, m: int, rng: RngLike = None) -> Subspace:
    """Uniform random m-dimensional subspace of R^n.

    Raises:
        DomainError: unless 1 <= m <= n
    """
    if not 1 <= m <= n:
        raise DomainError(f"sample_grassmann needs 1 <= m <= n, got m={m}, n={n}")
    frames, _ = sample_frames(as_generator(rng), 1, n, m)
    return Subspace(n, m, frames[0])


def random_rotation(n: int, rng: RngLike = None) -> np.ndarray:
    """Haar-distributed orthogonal n×n matrix."""
    frames, _ = sample_frames(as_generator(rng), 1, n, n)
    return frames[0]


def check_rotation(rotation: Optional[np.ndarray], dim: int, what: str) -> Optional[np.ndarray]:
    if rotation is None:
        return None
    rotation = np.asarray(rotation, dtype=float)
    if rotation.shape != (dim, dim):
        raise DomainError(f"{what} rotation must be {dim}x{dim}, got {rotation.shape}")
    if np.max(np.abs(rotation.T @ rotation - np.eye(dim)), initial=0.0) > 1e-10:
        raise DomainError(f"{what} rotation is not orthogonal")
    return rotation
