"""Free-fermion Page curves: covariance-matrix entanglement numerics.

Random fermionic Gaussian ensembles, measure-concentration checks, quench
dynamics of period-2 tight-binding chains, closed-form moment and series
predictions for long-time-averaged entanglement, a brute-force Fock-space
oracle, and a reproducible experiment CLI (``ffpage``).
"""

__version__ = "1.0.0"

from .errors import NumericalError, ValidationError
from .gaussian import (
    binary_entropy,
    entropy,
    entropy_from_spectrum,
    entropy_series,
    hs_distance,
    reduce_covariance,
    validate_covariance,
    x_transform,
)
from .linalg import (
    conjugate,
    eigh,
    require_hermitian,
    require_unitary,
    sample_haar_isometry,
    sample_haar_unitary,
    split_rng,
)
from .rfg import (
    EnsembleConfig,
    analytic_bound,
    concentration_experiment,
    default_epsilon_grid,
    moment_alpha_beta,
    rfg_page_curve,
    sample_covariance,
    sample_reduced,
    series_rfg,
    variance_scaling,
)
from .quench import (
    HamiltonianSpec,
    OccupationProfile,
    Propagator,
    TimeGrid,
    build_single_particle,
    conserved_occupations,
    density_wave_covariance,
    evolve_covariance,
    sample_times,
)
from .curves import (
    MomentSet,
    PageCurve,
    PagePoint,
    dynamical_page_curve,
    interacting_reference,
    moment_prediction,
    quasiparticle_entropy,
    series_atypical,
    series_curve,
    series_dyn,
    time_averaged_moments,
)
from .oracle import (
    FockState,
    build_density_wave,
    build_many_body,
    covariance_from_fock,
    evolve_fock,
    fock_entropy,
    four_point,
    reduced_density_matrix,
)

__all__ = [
    "__version__",
    "NumericalError",
    "ValidationError",
    "binary_entropy",
    "entropy",
    "entropy_from_spectrum",
    "entropy_series",
    "hs_distance",
    "reduce_covariance",
    "validate_covariance",
    "x_transform",
    "conjugate",
    "eigh",
    "require_hermitian",
    "require_unitary",
    "sample_haar_isometry",
    "sample_haar_unitary",
    "split_rng",
    "EnsembleConfig",
    "analytic_bound",
    "concentration_experiment",
    "default_epsilon_grid",
    "moment_alpha_beta",
    "rfg_page_curve",
    "sample_covariance",
    "sample_reduced",
    "series_rfg",
    "variance_scaling",
    "HamiltonianSpec",
    "OccupationProfile",
    "Propagator",
    "TimeGrid",
    "build_single_particle",
    "conserved_occupations",
    "density_wave_covariance",
    "evolve_covariance",
    "sample_times",
    "MomentSet",
    "PageCurve",
    "PagePoint",
    "dynamical_page_curve",
    "interacting_reference",
    "moment_prediction",
    "quasiparticle_entropy",
    "series_atypical",
    "series_curve",
    "series_dyn",
    "time_averaged_moments",
    "FockState",
    "build_density_wave",
    "build_many_body",
    "covariance_from_fock",
    "evolve_fock",
    "fock_entropy",
    "four_point",
    "reduced_density_matrix",
]
