"""Qutrit ping-pong protocol: coding algebra, attack analysis, simulation."""

from .attack import (
    AttackColumn,
    AttackOperator,
    ColumnAttack,
    DetectionReport,
    NoAttack,
    ReferenceAttack,
    REFERENCE_ATTACKS,
    SymmetricAttack,
    attack_from_dict,
    attack_to_dict,
    blended_detection,
    column_z_from_x,
    complete_circulant,
    detection_from_column,
    load_attack,
    normalized_column,
    symmetric_column,
    verify_reference_attacks,
)
from .comparison import (
    ProtocolDescriptor,
    comparison_curve_data,
    format_protocol_table,
    protocol_table,
)
from .information import (
    FREQUENCY_PRESETS,
    TRIT_TO_BIT,
    DensityMatrix9,
    FrequencyTable,
    InfoResult,
    assemble_rho,
    cubic_coefficients,
    factorized_eigenvalues,
    holevo_information,
    info_curve,
    load_frequency_table,
    source_entropy,
)
from .protocol import (
    ControlTable,
    JointState,
    ProtocolConfig,
    RunReport,
    apply_branch_attack,
    apply_travel_unitary,
    attack_state,
    control_distribution,
    decode_distribution,
    detection_probability,
    initial_state,
    load_protocol_config,
    rounds_for_confidence,
    run,
    write_transcript,
)
from .qutrit import (
    BASIS_LABELS,
    OMEGA,
    PARTNER_BASIS,
    Hermitian9,
    Ket3,
    MubBasis,
    NumericalError,
    TwoQutritKet,
    Unitary3,
    bell_state,
    coding_unitary,
    control_correlations,
    hermitian_eigenvalues,
    mub,
    solve_cubic,
)

__version__ = "0.1.0"

__all__ = [
    "AttackColumn",
    "AttackOperator",
    "BASIS_LABELS",
    "ColumnAttack",
    "ControlTable",
    "DensityMatrix9",
    "DetectionReport",
    "FREQUENCY_PRESETS",
    "FrequencyTable",
    "Hermitian9",
    "InfoResult",
    "JointState",
    "Ket3",
    "MubBasis",
    "NoAttack",
    "NumericalError",
    "OMEGA",
    "PARTNER_BASIS",
    "ProtocolConfig",
    "ProtocolDescriptor",
    "REFERENCE_ATTACKS",
    "ReferenceAttack",
    "RunReport",
    "SymmetricAttack",
    "TRIT_TO_BIT",
    "TwoQutritKet",
    "Unitary3",
    "apply_branch_attack",
    "apply_travel_unitary",
    "assemble_rho",
    "attack_from_dict",
    "attack_state",
    "attack_to_dict",
    "bell_state",
    "blended_detection",
    "coding_unitary",
    "column_z_from_x",
    "comparison_curve_data",
    "complete_circulant",
    "control_correlations",
    "control_distribution",
    "cubic_coefficients",
    "decode_distribution",
    "detection_from_column",
    "detection_probability",
    "factorized_eigenvalues",
    "format_protocol_table",
    "hermitian_eigenvalues",
    "holevo_information",
    "info_curve",
    "initial_state",
    "load_attack",
    "load_frequency_table",
    "load_protocol_config",
    "mub",
    "normalized_column",
    "protocol_table",
    "rounds_for_confidence",
    "run",
    "solve_cubic",
    "source_entropy",
    "symmetric_column",
    "verify_reference_attacks",
    "write_transcript",
]
