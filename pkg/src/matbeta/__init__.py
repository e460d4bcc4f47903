"""Mixed moments E[X^m Y^r Z^s] of the 2x2 matrix-variate Beta distribution.

Two independent analytic engines (closed-form products and determinant-shift
reductions) are cross-checked bit-exactly in rational arithmetic and
validated against deterministic quadrature and Monte Carlo sampling oracles,
including the large-frame decay study for projection blocks.
"""

from ._backend import active_backend, set_backend, using_numba
from .asymptotics import (
    DecayStudy,
    claimed_coefficient,
    decay_summary,
    decay_table,
    fit_decay_exponent,
    leading_coefficient_empirical,
    limit_coefficient,
)
from .closed_form import moment, moment_marginal, moment_mixed, moment_xz
from .core import (
    BetaParams,
    MomentEstimate,
    MomentIndex,
    Scalar,
    Sym2Matrix,
    in_domain,
    odd_double_factorial,
    pochhammer,
)
from .quadrature import (
    QuadratureSpec,
    density,
    log_beta2,
    log_multigamma2,
    quad_moment,
    quad_moments,
    quad_normalization,
)
from .recursion import (
    ShiftFactor,
    complement_shift_factor,
    det_shift_factor,
    marginal_mean_from_shifts,
    moment_mixed_by_reduction,
    moment_xz_by_reduction,
    z_reduction_factor,
)
from .sampling import (
    MatrixBetaSampler,
    RngSpec,
    StiefelBlockSampler,
    StiefelSpec,
    estimate_from_samples,
    mc_estimate,
    sample_matrix_beta,
    sample_stiefel_block,
    sample_wishart2,
)

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "DecayStudy",
    "MatrixBetaSampler",
    "MomentEstimate",
    "MomentIndex",
    "QuadratureSpec",
    "RngSpec",
    "Scalar",
    "ShiftFactor",
    "StiefelBlockSampler",
    "StiefelSpec",
    "Sym2Matrix",
    "active_backend",
    "claimed_coefficient",
    "complement_shift_factor",
    "decay_summary",
    "decay_table",
    "density",
    "det_shift_factor",
    "estimate_from_samples",
    "fit_decay_exponent",
    "in_domain",
    "leading_coefficient_empirical",
    "limit_coefficient",
    "log_beta2",
    "log_multigamma2",
    "marginal_mean_from_shifts",
    "mc_estimate",
    "moment",
    "moment_marginal",
    "moment_mixed",
    "moment_mixed_by_reduction",
    "moment_xz",
    "moment_xz_by_reduction",
    "odd_double_factorial",
    "pochhammer",
    "quad_moment",
    "quad_moments",
    "quad_normalization",
    "sample_matrix_beta",
    "sample_stiefel_block",
    "sample_wishart2",
    "set_backend",
    "using_numba",
    "z_reduction_factor",
]
