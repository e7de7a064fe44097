"""Exact dressing of qubit Hamiltonians with Pauli-product unitaries."""

from ilcdress.ansatz import IlcAnsatz
from ilcdress.anticom import (
    AnticomRequest,
    build_constraint_matrix,
    find_anticommuting_set,
    solve_for_words,
    solve_gf2,
)
from ilcdress.dis import DisPartition, build_dis, expand_entanglers, gradient
from ilcdress.dressing import (
    DressingReport,
    dress_ilc,
    dress_ilc_reported,
    dress_qcc,
    growth_avg,
    growth_worst,
    random_hermitian_op,
    random_ilc_transform,
    random_qcc_transform,
)
from ilcdress.errors import (
    ContractError,
    ConvergenceError,
    DimensionError,
    ExtractionError,
    FcidumpParseError,
    IlcdressError,
    InfeasibleError,
    PauliParseError,
)
from ilcdress.fermion import (
    FermionIntegrals,
    FermionOp,
    add_spin_penalty,
    hartree_fock_bitstring,
    load_fcidump,
    map_integrals,
    map_to_qubits,
    parse_fcidump,
    s_squared_operator,
)
from ilcdress.ilc import (
    IlcOptResult,
    SubspaceProblem,
    build_subspace,
    extract_parameters,
    optimize_ilc,
    solve_ground,
)
from ilcdress.meanfield import (
    QmfOptResult,
    QmfState,
    basis_expectation,
    optimize_qmf,
    qmf_expectation,
)
from ilcdress.pauli import (
    PauliWord,
    SparsePauliOp,
    commutes,
    load_pauli,
    parse_pauli_text,
    save_pauli,
    word_multiply,
)
from ilcdress.pipeline import (
    PipelineConfig,
    PipelineResult,
    PointResult,
    freeze_ansatz_scan,
    run_pipeline,
)
from ilcdress.util import RunManifest, parallel_map, thread_count

__version__ = "0.1.0"

__all__ = [
    "AnticomRequest",
    "ContractError",
    "ConvergenceError",
    "DimensionError",
    "DisPartition",
    "DressingReport",
    "ExtractionError",
    "FcidumpParseError",
    "FermionIntegrals",
    "FermionOp",
    "IlcAnsatz",
    "IlcOptResult",
    "IlcdressError",
    "InfeasibleError",
    "PauliParseError",
    "PauliWord",
    "PipelineConfig",
    "PipelineResult",
    "PointResult",
    "QmfOptResult",
    "QmfState",
    "RunManifest",
    "SparsePauliOp",
    "SubspaceProblem",
    "add_spin_penalty",
    "basis_expectation",
    "build_constraint_matrix",
    "build_dis",
    "build_subspace",
    "commutes",
    "dress_ilc",
    "dress_ilc_reported",
    "dress_qcc",
    "expand_entanglers",
    "extract_parameters",
    "find_anticommuting_set",
    "freeze_ansatz_scan",
    "gradient",
    "growth_avg",
    "growth_worst",
    "hartree_fock_bitstring",
    "load_fcidump",
    "load_pauli",
    "map_integrals",
    "map_to_qubits",
    "optimize_ilc",
    "optimize_qmf",
    "parallel_map",
    "parse_fcidump",
    "parse_pauli_text",
    "qmf_expectation",
    "random_hermitian_op",
    "random_ilc_transform",
    "random_qcc_transform",
    "run_pipeline",
    "s_squared_operator",
    "save_pauli",
    "solve_for_words",
    "solve_ground",
    "solve_gf2",
    "thread_count",
    "word_multiply",
]
