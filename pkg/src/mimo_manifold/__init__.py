"""Array-independent MIMO channel modeling via manifold decomposition.

The physical scattering channel factors into array-only sampling
matrices and an array-independent channel over a Fourier spatial basis.
On top of that factorization the package provides a virtual channel
representation on fixed azimuth angles, stochastic coupling-matrix
channel models that need no refit when arrays change, and the capacity /
conditioning / angular-power-spectrum experiment machinery with a
reproducible CLI.
"""

from .arrays import (SteeringMatrix, SteeringModel, condition_number,
                     condition_sweep, steering_matrix, steering_vector,
                     virtual_angles, wrap_angle)
from .manifold import (SamplingMatrix, dft_matrix, factorize_channel,
                       fourier_basis, reconstruction_residual, sampling_matrix,
                       synthesize_channel)
from .metrics import (ApsGrid, CapacityStats, ConditionReport, capacity,
                      capon_aps, condition_report, ergodic_capacity,
                      full_correlation)
from .models import (Aism1Params, Aism2Params, SayeedParams,
                     WeichselbergerParams, aism1_sample, aism1_sample_h0,
                     aism2_sample, aism2_sample_h0, fit_aism1_from_ensemble,
                     fit_aism1_method1, fit_aism2, fit_sayeed,
                     fit_weichselberger, sayeed_sample, weichselberger_sample)
from .scattering import (ChannelEnsemble, Cluster, PathSet, expand_paths,
                         generate_scenario, normalize_ensemble, path_gains,
                         realize_h, realize_h0, three_cluster_demo)
from .vcr import (PathPartition, VirtualChannel, approx_virtual_from_partition,
                  cluster_submatrix_bounds, dirichlet_kernel, from_virtual,
                  partition_paths, sayeed_kernel, sayeed_vcr_transform,
                  to_virtual, virtual_power_image)

__version__ = "0.1.0"
