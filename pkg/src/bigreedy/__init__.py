"""Bi-greedy maximization of continuous submodular functions on [0, 1]^n."""
from .envelope import (
    Curve,
    Envelope,
    MixedStrategy,
    intersect_diagonal,
    sample_curve,
    upper_concave_envelope,
)
from .estimators import BinarySearchBiGreedy, GameBiGreedy
from .exceptions import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    NonFiniteValueError,
    NotPositiveDefiniteError,
    SingleCrossingError,
    ValidationFailure,
)
from .game import expected_utility_min, game_utility, point_in_region, positive_region
from .harness import ExperimentSummary, grid_oracle, run_experiment
from .objective import (
    BlackBoxObjective,
    Objective,
    QuadraticModel,
    SoftmaxModel,
    eval_quadratic,
    eval_softmax,
    gen_nqp,
    gen_softmax,
    load_instance,
    partial,
    save_instance,
    validate_submodularity,
)
from .results import RunResult, TrialReport
from .weak import RunConfig, approx_argmax_1d

__version__ = "0.1.0"
