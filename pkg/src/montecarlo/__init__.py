"""Monte Carlo evaluation of the plane transforms on affine Grassmannians."""

from montecarlo.estimators import (DEFAULT_SAMPLES, MCEstimate, OffsetProposal, PlaneFunction,
                                   ProposalKind, combined_z, mc_pairing_duality, mc_strichartz,
                                   mc_strichartz_dual, mc_vs_radial)
from montecarlo.grassmann import (AffinePlane, Subspace, random_rotation, sample_frames,
                                  sample_grassmann)
from montecarlo.streams import DEFAULT_STREAMS, fresh_seed, run_streams

__all__ = [
    'DEFAULT_SAMPLES', 'MCEstimate', 'OffsetProposal', 'PlaneFunction', 'ProposalKind',
    'combined_z', 'mc_pairing_duality', 'mc_strichartz', 'mc_strichartz_dual', 'mc_vs_radial',
    'AffinePlane', 'Subspace', 'random_rotation', 'sample_frames', 'sample_grassmann',
    'DEFAULT_STREAMS', 'fresh_seed', 'run_streams',
]
