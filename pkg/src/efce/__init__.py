"""Uncoupled no-regret dynamics converging to extensive-form correlated
equilibrium in n-player general-sum imperfect-information games."""

from .deviations import (
    ConvexTriggerDeviation,
    NumericalError,
    TriggerDeviation,
    apply_deviation,
    apply_trigger,
    build_matrix,
    cumulative_weights,
    extend,
    fixed_point,
    is_trunk,
    stationary_distribution,
    validate_deviation,
)
from .dynamics import (
    EmpiricalFrequency,
    GapReport,
    RunLog,
    efce_gap,
    efce_gap_brute,
    run,
    subtree_best_response,
)
from .game import (
    EMPTY_SEQ,
    GameFormatError,
    GameTree,
    GameValidationError,
    InfoSet,
    builtin_game,
    parse_game,
    sequence_precedes,
    sequences_at_or_below,
    serialize_game,
)
from .regret import CallOrderError, CfrMinimizer, RegretMatching
from .strategies import (
    SequenceFormStrategy,
    UtilityVector,
    enumerate_pure,
    evaluate,
    format_strategy,
    is_valid_strategy,
    sample_pure,
    sequence_from_behavioral,
    uniform_strategy,
    utility_vector,
    validate_strategy,
)
from .trigger import (
    HullMinimizer,
    MixedTriggerMinimizer,
    PerTriggerMinimizer,
    PhiRegretMeter,
    PureTriggerMinimizer,
    RankOneFunctional,
    split_rngs,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY_SEQ",
    "CallOrderError",
    "CfrMinimizer",
    "ConvexTriggerDeviation",
    "EmpiricalFrequency",
    "GameFormatError",
    "GameTree",
    "GameValidationError",
    "GapReport",
    "HullMinimizer",
    "InfoSet",
    "MixedTriggerMinimizer",
    "NumericalError",
    "PerTriggerMinimizer",
    "PhiRegretMeter",
    "PureTriggerMinimizer",
    "RankOneFunctional",
    "RegretMatching",
    "RunLog",
    "SequenceFormStrategy",
    "TriggerDeviation",
    "UtilityVector",
    "apply_deviation",
    "apply_trigger",
    "build_matrix",
    "builtin_game",
    "cumulative_weights",
    "efce_gap",
    "efce_gap_brute",
    "enumerate_pure",
    "evaluate",
    "extend",
    "fixed_point",
    "format_strategy",
    "is_trunk",
    "is_valid_strategy",
    "parse_game",
    "run",
    "sample_pure",
    "sequence_from_behavioral",
    "sequence_precedes",
    "sequences_at_or_below",
    "serialize_game",
    "split_rngs",
    "stationary_distribution",
    "subtree_best_response",
    "uniform_strategy",
    "utility_vector",
    "validate_deviation",
    "validate_strategy",
    "__version__",
]
