"""Lossless enhancement of truncated-SVD compression.

The orthonormal factors of a rank-l SVD carry l*(l+1) redundant degrees
of freedom.  This package replaces each factor by its minimal set of
Givens rotation angles, shrinking the stored numbers from (m+n+1)*l to
(m+n-l)*l while reconstructing the truncated approximation exactly to
floating-point precision.
"""

from .analysis import (
    BudgetReport,
    StorageReport,
    budget_report,
    l_esvd_given_lsvd,
    sr_hat_limit_probe,
    storage_report,
    svd_failure_rank,
)
from .codec import (
    EsvdCompressed,
    compress,
    decode,
    decode_image,
    decompress,
    encode,
    encode_image,
    pack_index,
)
from .errors import EsvdError
from .estimator import EsvdCompressor
from .experiments import (
    DEFAULT_SEED,
    ExperimentRow,
    LosslessRow,
    SimulationConfig,
    run_lossless_trial,
    run_simulation,
    scatter_points,
    write_lossless_csv,
    write_simulation_csv,
)
from .metrics import MetricPair, coverage_p, mae, metric_pair, pearson
from .pnm import ImagePlanes, quantize_plane, read_pnm, write_pnm
from .rotations import (
    AngleSet,
    Rotation,
    compute_rotation,
    givens_angles,
    n_angles,
    orthonormality_residual,
    orthonormalize,
    random_orthonormal,
    reconstruct_orthonormal,
)
from .svd import TruncatedSvd, full_spectrum, reconstruct, truncated_svd

__version__ = "0.1.0"

__all__ = [
    "AngleSet",
    "BudgetReport",
    "DEFAULT_SEED",
    "EsvdCompressed",
    "EsvdCompressor",
    "EsvdError",
    "ExperimentRow",
    "ImagePlanes",
    "LosslessRow",
    "MetricPair",
    "Rotation",
    "SimulationConfig",
    "StorageReport",
    "TruncatedSvd",
    "budget_report",
    "compress",
    "compute_rotation",
    "coverage_p",
    "decode",
    "decode_image",
    "decompress",
    "encode",
    "encode_image",
    "full_spectrum",
    "givens_angles",
    "l_esvd_given_lsvd",
    "mae",
    "metric_pair",
    "n_angles",
    "orthonormality_residual",
    "orthonormalize",
    "pack_index",
    "pearson",
    "quantize_plane",
    "random_orthonormal",
    "read_pnm",
    "reconstruct",
    "reconstruct_orthonormal",
    "run_lossless_trial",
    "run_simulation",
    "scatter_points",
    "sr_hat_limit_probe",
    "storage_report",
    "svd_failure_rank",
    "truncated_svd",
    "write_lossless_csv",
    "write_pnm",
    "write_simulation_csv",
]
