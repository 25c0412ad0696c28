from .statevector import (
    COMPUTATIONAL_BASIS,
    DIAGONAL_BASIS,
    HADAMARD,
    IDENTITY,
    PAULI_X,
    PAULI_Z,
    MeasurementBasis,
    Projection,
    PureState,
    SingleQubitUnitary,
    apply_unitary,
    basis_index,
    basis_labels,
    branch_probabilities,
    fidelity,
    ghz_state,
    measure_qubit,
    project,
    tensor,
)
from .pcd import Parity, ParityOutcome, PhaseClass, pcd_branches, pcd_measure, pcd_probabilities
from .ecp import (
    Verdict,
    failure_coefficients,
    ghz_reduce,
    prepare_ancilla,
    projection_basis,
    round_branches,
    round_exact,
    round_statevector,
    run_trajectory,
    schmidt_projection_round,
)
from .analytics import (
    coefficients_from_entanglement,
    comparison_curves,
    coefficient_trajectory,
    concentration_report,
    entanglement,
    eq8_literal,
    required_rounds,
    schmidt_projection_yield,
    total_success_probability,
)
