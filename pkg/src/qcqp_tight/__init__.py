"""Exactness testing and optimizer recovery for homogeneous QCQPs with
three real or four complex quadratic constraints."""
from .linalg import (
    COMPLEX,
    REAL,
    EigenDecomposition,
    FieldMismatchError,
    HermitianMatrix,
    cross_form,
    eig,
    hermitian,
    identity,
    inner_product,
    null_basis,
    project_psd,
    psd_rank,
    quad_form,
    zeros,
)
from .decomposition import (
    DecompositionError,
    JointDefiniteness,
    JointDefinitenessError,
    RankOneDecomposition,
    check_joint_definiteness,
    decompose_two_forms,
    extract_four_forms,
    extract_three_forms,
)
from .ipm import (
    SENSE_EQ,
    SENSE_LE,
    SdpConvergenceError,
    SdpInfeasibleError,
    SdpSolverError,
)
from .sdp import (
    Constraint,
    QcqpInstance,
    SdpPair,
    SlaterReport,
    check_slater,
    purify,
    solve_sdp,
)
from .tightness import (
    OUTCOME_GAP,
    OUTCOME_RECOVERED,
    GapDiagnosis,
    RecoveryError,
    TightnessVerdict,
    diagnose_gap,
    recover_optimum,
    recover_zero_multiplier,
    solve_and_diagnose,
    solve_exact,
)
from .oracle import BruteForceResult, OracleError, brute_force_value
from .generator import GenerationError, GeneratorConfig, generate_instance
from .experiment import (
    ExperimentRow,
    ExperimentSummary,
    markdown_table,
    run_experiment,
)
from .slemma import (
    KIND_PROPERTY_WITNESS,
    KIND_PSD_CERTIFICATE,
    KIND_SYSTEM_SOLVABLE,
    CertificateError,
    CertificateResult,
    s_lemma_four_complex,
    s_lemma_three,
    yuan_lemma_four_complex,
    yuan_lemma_three,
)

__version__ = "0.1.0"
