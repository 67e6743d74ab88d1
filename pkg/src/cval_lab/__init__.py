"""Real-deterministic c-valued observables built from complex weak values.

A weak value A_w = <phi_n|A|psi> / <phi_n|psi> is complex; pairing its real
and imaginary parts with a zero-mean random variable xi of variance hbar^2
yields the real quantity A_c(phi_n, xi) = Re A_w + (xi/hbar) Im A_w whose
statistics over the joint (n, xi) ensemble reproduce quantum expectation
values, variances, uncertainty bounds, and estimation limits. This package
constructs those quantities for finite-dimensional systems and on spatial
grids, and verifies each identity exactly and by Monte Carlo.
"""

from .errors import (
    ConfigError,
    ConsistencyError,
    CvalLabError,
    DimensionMismatch,
    GridError,
    HermiticityError,
    MomentError,
    NormalizationError,
    OverlapError,
    ProvenanceError,
)
from .hilbert import (
    TAU_EIG,
    TAU_HERM,
    TAU_ID,
    TAU_NORM,
    TAU_ORTHO,
    MixedEnsemble,
    OperatorMatrix,
    OrthonormalBasis,
    PlanckConfig,
    StateVector,
    anticommutator,
    born_probabilities,
    commutator,
    density_matrix,
    eigenbasis,
    expectation,
    kron_op,
    kron_state,
    product_basis,
    validate_density,
)
from .random_objects import (
    MIN_OVERLAP_DEFAULT,
    PAULI,
    haar_basis,
    haar_state,
    haar_state_min_overlap,
    random_ensemble,
    random_hermitian,
    random_operator,
    rotated_qubit_basis,
)
from .weakvalue import (
    EPS_OVERLAP,
    WeakValueField,
    weak_value,
    weak_value_field,
    weak_value_field_mixed,
    weak_value_mixed,
    weak_value_parts,
)
from .cval import (
    CValField,
    JointEnumeration,
    JointSample,
    XiModel,
    build_cval,
    cval_mixed,
    enumerate_joint,
    field_from_weak_values,
    recover_weak_value,
    sample_xi,
)
from .ensemble import (
    EnsembleAverage,
    SeparableXiProduct,
    commutator_average,
    covariance,
    equivalence_theorem,
    full_product_representation,
    mean_cval,
    mixed_product_average,
    product_average,
    separable_xi_product,
    statistical_deviation,
    variance,
    verification_record,
    xi_weighted_mean,
)
from .uncertainty import (
    BoundReport,
    JointHistogram,
    VarianceDecomposition,
    decompose_variance,
    epistemic_restriction_check,
    joint_distribution,
    kennard_robertson_bound,
    krs_check,
    schrodinger_bound,
)
from .estimation import (
    EstimationReport,
    EstimatorField,
    classical_limit_scan,
    ms_error,
    optimal_estimator,
    self_estimation_tradeoff,
    single_shot_error,
)
from .continuum import (
    EPS_RHO,
    TAU_GRID,
    GridCVal,
    GridWavefunction,
    average_equality_check,
    build_gaussian,
    build_plane_wave,
    cval_hamiltonian_free,
    cval_momentum,
    grid_profile_csv,
    hamiltonian_field,
    momentum_field,
    position_momentum_krs,
)
from .serialize import (
    from_jsonable,
    load_json,
    read_matrix_csv,
    read_state_csv,
    save_json,
    to_jsonable,
    write_bound_reports_csv,
    write_matrix_csv,
    write_records_json,
    write_scan_csv,
    write_state_csv,
)
from .verify import CheckRecord, SuiteReport, run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CValField",
    "CheckRecord",
    "ConfigError",
    "ConsistencyError",
    "CvalLabError",
    "DimensionMismatch",
    "EPS_OVERLAP",
    "EPS_RHO",
    "EnsembleAverage",
    "EstimationReport",
    "EstimatorField",
    "GridCVal",
    "GridError",
    "GridWavefunction",
    "HermiticityError",
    "JointEnumeration",
    "JointHistogram",
    "JointSample",
    "MIN_OVERLAP_DEFAULT",
    "MixedEnsemble",
    "MomentError",
    "NormalizationError",
    "OperatorMatrix",
    "OrthonormalBasis",
    "OverlapError",
    "PAULI",
    "PlanckConfig",
    "ProvenanceError",
    "SeparableXiProduct",
    "StateVector",
    "SuiteReport",
    "TAU_EIG",
    "TAU_GRID",
    "TAU_HERM",
    "TAU_ID",
    "TAU_NORM",
    "TAU_ORTHO",
    "VarianceDecomposition",
    "WeakValueField",
    "XiModel",
    "anticommutator",
    "average_equality_check",
    "born_probabilities",
    "build_cval",
    "build_gaussian",
    "build_plane_wave",
    "classical_limit_scan",
    "commutator",
    "commutator_average",
    "covariance",
    "cval_hamiltonian_free",
    "cval_mixed",
    "cval_momentum",
    "decompose_variance",
    "density_matrix",
    "eigenbasis",
    "enumerate_joint",
    "epistemic_restriction_check",
    "equivalence_theorem",
    "expectation",
    "field_from_weak_values",
    "from_jsonable",
    "full_product_representation",
    "grid_profile_csv",
    "haar_basis",
    "haar_state",
    "haar_state_min_overlap",
    "hamiltonian_field",
    "joint_distribution",
    "kennard_robertson_bound",
    "kron_op",
    "kron_state",
    "krs_check",
    "load_json",
    "mean_cval",
    "mixed_product_average",
    "momentum_field",
    "ms_error",
    "optimal_estimator",
    "position_momentum_krs",
    "product_average",
    "product_basis",
    "random_ensemble",
    "random_hermitian",
    "random_operator",
    "read_matrix_csv",
    "read_state_csv",
    "recover_weak_value",
    "rotated_qubit_basis",
    "run_identity_suite",
    "sample_xi",
    "save_json",
    "schrodinger_bound",
    "self_estimation_tradeoff",
    "separable_xi_product",
    "single_shot_error",
    "statistical_deviation",
    "to_jsonable",
    "validate_density",
    "variance",
    "verification_record",
    "weak_value",
    "weak_value_field",
    "weak_value_field_mixed",
    "weak_value_mixed",
    "weak_value_parts",
    "write_bound_reports_csv",
    "write_matrix_csv",
    "write_records_json",
    "write_scan_csv",
    "write_state_csv",
    "xi_weighted_mean",
]
