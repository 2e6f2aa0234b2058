"""Zero-sum matrix games as a verifiable benchmark.

Generation of random games, exact solving (LP simplex plus an independent
support-enumeration route), an exploitability-based reward, best-of-k
evaluation of strategy-proposing agents, padding experiments, and
executable checks of the metric's structural properties.
"""

from .agents import (
    AgentResponse,
    BlockSolverAgent,
    DEFAULT_TEMPLATE,
    MaximinAgent,
    NoisyOracleAgent,
    OracleAgent,
    PARSE_ERRORS,
    PromptTemplate,
    RemoteModelAgent,
    RemoteModelConfig,
    UniformAgent,
    build_prompt,
    builtin_agent,
    extract_matrix,
    parse_response,
    prompt_digest,
    remote_model_agent,
    serialize_pair,
)
from .core import (
    ExploitReport,
    MatrixMeta,
    MixedStrategy,
    PayoffMatrix,
    StrategyPair,
    apply_affine,
    apply_permutation,
    exploitability,
    normalize_payoffs,
    permute_pair,
    project_to_simplex,
)
from .errors import (
    ConfigError,
    ConstructionError,
    ContractViolation,
    DegenerateMatrixError,
    SolverError,
    TransportExhausted,
    VerificationError,
    ZeroSumError,
)
from .gen import (
    GameRecord,
    GameSpec,
    PaddedGameRecord,
    dominated_pad,
    eval_game_spec,
    make_eval_set,
    random_pad,
    sample_game,
)
from .harness import (
    EvalResult,
    GameResult,
    InvarianceReport,
    PaddingCliffReport,
    affine_invariance_audit,
    binomial_se,
    evaluate,
    padding_cliff_experiment,
    permutation_equivariance_audit,
    rescore,
    score_responses,
)
from .rng import child_seed, generator
from .solver import (
    Equilibrium,
    maximin_pure,
    raw_exploit,
    solve_zero_sum_lp,
    support_enumeration,
    uniform_pair,
    verify_equilibrium,
)
from .theory import (
    ToyPolicy,
    TraceStep,
    TrainResult,
    check_residual_lipschitz,
    grpo_advantages,
    grpo_cancellation_check,
    selector_discontinuity_demo,
    toy_grpo_train,
)

__version__ = "0.1.0"

__all__ = [
    "AgentResponse",
    "BlockSolverAgent",
    "ConfigError",
    "ConstructionError",
    "ContractViolation",
    "DEFAULT_TEMPLATE",
    "DegenerateMatrixError",
    "Equilibrium",
    "EvalResult",
    "ExploitReport",
    "GameRecord",
    "GameResult",
    "GameSpec",
    "InvarianceReport",
    "MatrixMeta",
    "MaximinAgent",
    "MixedStrategy",
    "NoisyOracleAgent",
    "OracleAgent",
    "PARSE_ERRORS",
    "PaddedGameRecord",
    "PaddingCliffReport",
    "PayoffMatrix",
    "PromptTemplate",
    "RemoteModelAgent",
    "RemoteModelConfig",
    "SolverError",
    "StrategyPair",
    "ToyPolicy",
    "TraceStep",
    "UniformAgent",
    "TrainResult",
    "TransportExhausted",
    "VerificationError",
    "ZeroSumError",
    "affine_invariance_audit",
    "apply_affine",
    "apply_permutation",
    "binomial_se",
    "build_prompt",
    "builtin_agent",
    "check_residual_lipschitz",
    "child_seed",
    "dominated_pad",
    "eval_game_spec",
    "evaluate",
    "exploitability",
    "extract_matrix",
    "generator",
    "grpo_advantages",
    "grpo_cancellation_check",
    "make_eval_set",
    "maximin_pure",
    "normalize_payoffs",
    "padding_cliff_experiment",
    "parse_response",
    "permutation_equivariance_audit",
    "permute_pair",
    "project_to_simplex",
    "prompt_digest",
    "random_pad",
    "raw_exploit",
    "remote_model_agent",
    "rescore",
    "sample_game",
    "score_responses",
    "selector_discontinuity_demo",
    "serialize_pair",
    "solve_zero_sum_lp",
    "support_enumeration",
    "toy_grpo_train",
    "uniform_pair",
    "verify_equilibrium",
]
