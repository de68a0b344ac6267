"""Phase-space CGLMP/SLK Bell tests for two-mode squeezed vacuum states."""

from .bell_core import (
    BellEvaluator,
    bell_value,
    cglmp_epsilon,
    cglmp_value,
    characteristic_tmss,
    classical_bound_enumeration,
    corr_tmss,
    corr_tmss_lossy,
    correlation_weight,
    order_parameter,
    quasiprob_tmss,
    slk_coefficient_S,
    slk_coefficients_via_dft,
    slk_value,
)
from .fock_oracle import (
    FockCutoff,
    JointPhotonDistribution,
    apply_bernoulli_loss,
    choose_cutoff,
    displaced_fock_overlap,
    displacement_matrix,
    joint_photon_distribution,
    oracle_bell_from_probs,
    oracle_correlation,
    oracle_correlation_lossy,
    tmss_amplitude,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    bound_efficiency,
    maximize_bell,
)
from .scenario import (
    BellKind,
    BellScenario,
    DetectorModel,
    EfficiencyMode,
    IDEAL_DETECTORS,
    MeasurementSettings,
    TmssParams,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
