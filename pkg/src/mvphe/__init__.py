"""mvphe: somewhat-homomorphic encryption from noisy multivariate polynomial
evaluation over a prime field, plus a game-based security harness."""

from .errors import (
    ContextMismatchError,
    DepthError,
    FileFormatError,
    KeyGenError,
    ParameterInfeasibleError,
    ProtocolViolationError,
    UnsupportedOperationError,
)
from .field import FieldContext, FieldElement, round_nearest
from .linalg import (
    MatrixFq,
    dot_mod,
    in_rowspace,
    matmul_mod,
    nullspace_basis,
    rank,
    rref,
    solve_head_for_orthogonality,
    solve_linear,
)
from .mvpoly import (
    IdealSpec,
    MonomialIndex,
    Polynomial,
    eval_monomials,
    evaluation_matrix,
    ideal_truncated_basis,
    monomial_count,
    poly_eval,
    poly_mul,
)
from .sampling import (
    NoiseSpec,
    RandomStream,
    sample_discrete_gaussian,
    sample_noise_vector,
    sample_uniform_fq,
)
from .scheme import (
    MODE_ADDITIVE,
    MODE_MULT,
    Ciphertext,
    EvalKey,
    NoiseBudget,
    SchemeParams,
    SecretKey,
    decrypt,
    encrypt,
    encrypt_traced,
    eval_key,
    hom_add,
    hom_mult,
    keygen,
    noise_bench,
    noise_budget,
    noise_measure,
)
from .games import (
    AdvantageEstimate,
    Leak,
    SubspaceInstance,
    dlwe_game,
    estimate_advantage,
    hsm_game,
    indcpa_game,
    joint_ci,
    lemma1_adapter,
    lemma1_experiment,
    lwe_subspace_instance,
    scheme_instance,
    theorem1_adapter,
    theorem1_experiment,
    uniform_subspace_instance,
)
from .presets import toy_additive_params, toy_ideal, toy_mult_params

__version__ = "0.1.0"
