"""Quantum adaptive search for best subset selection, simulated classically.

The package splits into a functional core (datasets and loss tables,
Grover simulation, the adaptive search, voting, baselines, data
generation, theory checks) plus scikit-learn style estimators and a
command-line harness for the experiment suites.
"""

__version__ = "0.1.0"

from .baselines import (
    LassoFit,
    Metrics,
    accuracy_rate,
    exhaustive_bss,
    forward_stepwise,
    fp_fn,
    lasso_cv,
    rte,
)
from .datagen import LinearSample, SimScenario, gen_linear, load_csv, make_beta, toeplitz_sigma
from .errors import (
    ConditionViolated,
    DataError,
    DegenerateMarking,
    DegenerateSignal,
    DimensionTooLarge,
    DomainError,
    EmptyTestSet,
    MissingColumn,
    NoConvergence,
    NonNumericCell,
    ParseError,
    QsubsetError,
    SubsetTooLarge,
    ZeroVector,
)
from .estimators import (
    ExhaustiveSubsetRegressor,
    LassoCVRegressor,
    QASRegressor,
    StepwiseSubsetRegressor,
)
from .hybrid import (
    HybridConfig,
    VoteResult,
    exact_vote_success,
    hybrid_select,
    kl_bernoulli,
    majority_vote,
    select_minimum,
    vote_bound_check,
    vote_lower_bound,
)
from .qas import (
    QasConfig,
    QasTrace,
    SelectionOutcome,
    expected_update_cost,
    iterations_to_solution,
    local_eval,
    qas_search,
    schedule_ops,
)
from .qsim import (
    MarkPredicate,
    TwoLevelState,
    average_success_probability,
    closed_form_state,
    grover_angle,
    grover_search,
    grover_statevector,
    measure_statevector,
    measure_two_level,
)
from .regress import (
    Dataset,
    FitResult,
    LossTable,
    QlpRecovery,
    SubsetIndex,
    build_loss_table,
    center,
    center_with,
    ols_fit,
    pred_error,
    predict_svd,
    qlp_recover,
    train_mse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
