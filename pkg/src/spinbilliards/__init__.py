"""Single-excitation dynamics of XX spin lattices shaped as 2D billiards."""

__version__ = "0.1.0"

from .ensemble import EnsembleConfig, EnsembleResult, derive_seed, run_ensemble
from .evolution import (
    PropagationPlan,
    SpectralDecomposition,
    Trajectory,
    characteristic_times,
    diagonalize,
    evolve_spectral,
    evolve_stroboscopic,
    initial_state,
)
from .geometry import (
    BilliardGeometry,
    DefectConfig,
    apply_defects,
    build_custom,
    build_quarter_stadium,
    build_rectangle,
    neighbors,
)
from .hamiltonian import (
    Hamiltonian,
    NoiseModel,
    build_hamiltonian,
    noise_diagonal,
    sample_noise_amplitude,
)
from .observables import (
    MomentumGrid,
    TimeSeries,
    autocorrelation,
    cgf_time_series,
    coarse_grained_fidelity,
    fidelity,
    momentum_distribution,
    peak_census,
    population_snapshot,
    revival_contrast,
)
from .spectral_stats import (
    SpacingHistogram,
    UnfoldedSpectrum,
    ks_distance,
    reference_cdf,
    reference_pdf,
    spacing_histogram,
    unfold,
)

__all__ = [
    "BilliardGeometry",
    "DefectConfig",
    "EnsembleConfig",
    "EnsembleResult",
    "Hamiltonian",
    "MomentumGrid",
    "NoiseModel",
    "PropagationPlan",
    "SpacingHistogram",
    "SpectralDecomposition",
    "TimeSeries",
    "Trajectory",
    "UnfoldedSpectrum",
    "apply_defects",
    "autocorrelation",
    "build_custom",
    "build_hamiltonian",
    "build_quarter_stadium",
    "build_rectangle",
    "cgf_time_series",
    "characteristic_times",
    "coarse_grained_fidelity",
    "derive_seed",
    "diagonalize",
    "evolve_spectral",
    "evolve_stroboscopic",
    "fidelity",
    "initial_state",
    "ks_distance",
    "momentum_distribution",
    "neighbors",
    "noise_diagonal",
    "peak_census",
    "population_snapshot",
    "reference_cdf",
    "reference_pdf",
    "revival_contrast",
    "run_ensemble",
    "sample_noise_amplitude",
    "spacing_histogram",
    "unfold",
]
