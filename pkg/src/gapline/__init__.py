"""Decay bounds for spectral projectors of banded Hermitian matrices.

The package builds banded Hermitian test matrices with a prescribed
spectrum, computes their exact spectral projectors, measures how fast the
entries decay away from the diagonal, and compares that decay with a family
of a-priori bounds.
"""

from .bounds import (
    FAMILIES,
    BoundCurve,
    FuchsRate,
    bound_curve,
    demko_params,
    fuchs_rate,
    gaussian_majorant,
    hasson_rate,
    inverse_bound_demko,
    inverse_bound_frommer,
    inverse_bound_frommer_opt,
    inverse_bound_refined,
    inverse_bound_refined_opt,
    proj_bound_bbr,
    proj_bound_bbr_opt,
    proj_bound_integral,
    proj_bound_sl,
    proj_bound_sl_opt,
    proj_bound_tau,
    proj_bound_tau_opt,
    sign_bound_integral,
    sign_bound_quadrature,
    sign_bound_tau_opt,
)
from .config import PRESETS, ExperimentConfig
from .errors import *  # noqa: F401,F403
from .experiments import ExperimentResult, run_experiment, write_outputs
from .factory import (
    BandedHermitian,
    Provenance,
    SeededRng,
    assemble_dense,
    band_reduce,
    generate,
    jacobi_eigh,
    random_orthogonal,
)
from .io import read_matrix, write_matrix
from .projector import (
    DecayProfile,
    TruncationReport,
    decay_profile,
    first_below,
    sign_matrix,
    spectral_projector,
    truncate_band,
    truncation_bandwidth,
    truncation_errors,
    truncation_report,
)
from .quadrature import (
    QuadratureResult,
    integrate_adaptive,
    integrate_semi_infinite,
    integrate_sqrt_singular,
)
from .spectrum import (
    EigenvalueLadder,
    SpectrumSpec,
    distinct_magnitudes,
    normalize_spectrum,
    spectrum_from_eigenvalues,
)

__version__ = "0.1.0"
