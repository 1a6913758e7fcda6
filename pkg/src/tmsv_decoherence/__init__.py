"""Entanglement of two-mode squeezed vacuum states under phase damping and
thermal amplitude damping, with an RK4 master-equation cross-check."""
from .amplitude import (
    AmplitudePoint,
    BlockDecomposition,
    ChannelParams,
    block_coefficient,
    block_decomposition,
    channel_params,
    is_separable,
    separability_border,
    upper_bound_er,
)
from .entanglement import EntanglementResult, maximally_correlated_er
from .errors import (
    ConvergenceError,
    DegenerateStateError,
    IntegrationError,
    NegativeProbabilityError,
    NoFiniteBorderError,
    NumericalError,
    PSDViolationError,
    TruncationError,
)
from .numerics import (
    Spectrum,
    log_factorial,
    log_sum_exp,
    shannon_entropy_bits,
    symmetric_eigenvalues,
    von_neumann_entropy_bits,
)
from .oracle import integrate_rk4
from .phase import (
    PhaseDampedMatrix,
    PhasePoint,
    build_phase_matrix,
    closest_disentangled_state,
    relative_entropy_exact,
)
from .sweep import SweepConfig, SweepRecord, emit_border, run_sweep, run_verify
from .tmsv import SchmidtDistribution, pure_entanglement_bits, schmidt_distribution

__version__ = "0.1.0"
