"""Reduced-dynamics linearity toolkit.

Given a family of system-environment states and a joint propagator, decide
whether the induced map on reduced states is linear, and when it is, build
that map, its signed operator-sum form, and the complete-positivity verdict.
"""

from .config import DEFAULT_TOL, ToleranceConfig
from .consistency import (
    ConsistencyReport,
    check_hull_consistency,
    check_pairwise_consistency,
    check_subspace_consistency,
)
from .errors import (
    DimensionError,
    EmptyFamilyError,
    HermiticityError,
    IncompleteDomainError,
    NotAStateError,
    NotInSpanError,
    RdlError,
    SamplingExhaustedError,
    SingularSystemError,
    UnitarityError,
)
from .families import (
    RejectedSample,
    StateFamily,
    TwoQubitParams,
    assemble_two_qubit,
    constrained_two_qubit_family,
    extract_two_qubit_params,
    full_two_qubit_family,
    product_family,
    random_density_matrix,
    random_two_qubit_params,
    sample_two_qubit_params,
)
from .maps import (
    AssignmentMap,
    MapVerdicts,
    SignedKraus,
    Superoperator,
    build_assignment,
    build_dynamical_map,
    decompose_signed_kraus,
    verdicts,
)
from .operators import (
    BipartiteDims,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    adjoint_action,
    basis_coords,
    from_basis_coords,
    hermitian_basis,
    hs_inner,
    hs_norm,
    is_hermitian,
    is_unitary,
    max_norm,
    min_eigenvalue,
    partial_trace_env,
    require_density,
    require_hermitian,
    require_unitary,
    tensor,
    trace_distance,
)
from .subspace import (
    ReducedExpansion,
    Subspace,
    build_subspace,
    build_subspace_from_operators,
    select_independent,
)
from .two_qubit import (
    ExperimentReport,
    LinearityCoefficients,
    ModelParams,
    PairDistance,
    analytic_bloch_step,
    bloch_vector,
    custom_subspace_experiment,
    linearity_residuals,
    model_unitary,
    pauli_eigenstates,
    solve_linearity_coefficients,
    swap_experiment,
    swap_unitary,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentMap",
    "BipartiteDims",
    "ConsistencyReport",
    "DEFAULT_TOL",
    "DimensionError",
    "EmptyFamilyError",
    "ExperimentReport",
    "HermiticityError",
    "IncompleteDomainError",
    "LinearityCoefficients",
    "MapVerdicts",
    "ModelParams",
    "NotAStateError",
    "NotInSpanError",
    "PAULIS",
    "PairDistance",
    "RdlError",
    "ReducedExpansion",
    "RejectedSample",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SamplingExhaustedError",
    "SignedKraus",
    "SingularSystemError",
    "StateFamily",
    "Subspace",
    "Superoperator",
    "ToleranceConfig",
    "TwoQubitParams",
    "UnitarityError",
    "adjoint_action",
    "analytic_bloch_step",
    "assemble_two_qubit",
    "basis_coords",
    "bloch_vector",
    "build_assignment",
    "build_dynamical_map",
    "build_subspace",
    "build_subspace_from_operators",
    "check_hull_consistency",
    "check_pairwise_consistency",
    "check_subspace_consistency",
    "constrained_two_qubit_family",
    "custom_subspace_experiment",
    "decompose_signed_kraus",
    "extract_two_qubit_params",
    "from_basis_coords",
    "full_two_qubit_family",
    "hermitian_basis",
    "hs_inner",
    "hs_norm",
    "is_hermitian",
    "is_unitary",
    "linearity_residuals",
    "max_norm",
    "min_eigenvalue",
    "model_unitary",
    "partial_trace_env",
    "pauli_eigenstates",
    "product_family",
    "random_density_matrix",
    "random_two_qubit_params",
    "require_density",
    "require_hermitian",
    "require_unitary",
    "sample_two_qubit_params",
    "select_independent",
    "solve_linearity_coefficients",
    "swap_experiment",
    "swap_unitary",
    "tensor",
    "trace_distance",
    "verdicts",
]
