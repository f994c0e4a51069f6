"""Maximum flow with learned predictions.

Warm-starts Edmonds-Karp from a conserving (possibly infeasible) predicted
flow, learns the prediction with least mean l1 error from sampled capacity
vectors, and bounds how many samples that takes.
"""

from .errors import (
    BindingError,
    InputError,
    InvariantViolation,
    ParseError,
    RefusalError,
    UnsupportedError,
)
from .learner import (
    PiecewiseLinearCost,
    build_cost,
    learn_from_optima,
    learn_prediction,
    reduce_to_mcf,
    sample_optima,
)
from .maxflow import (
    ResidualNetwork,
    SolveStats,
    max_flow,
    max_flow_from,
    min_cut_value_bruteforce,
    residual,
)
from .mincost import MinCostFlowInstance, min_cost_flow
from .network import (
    FlowAssignment,
    FlowDecomposition,
    FlowNetwork,
    check_conservation,
    decompose,
    flow_value,
    l1_error,
    violation_delta,
)
from .sampler import (
    FiniteSupport,
    IIDUniform,
    PerturbedBase,
    draw,
    expected_cost,
    hoeffding_sample_count,
    make_rng,
)
from .warmstart import (
    RepairReport,
    WarmStartReport,
    repair_cancel,
    repair_circulation,
    robust_race,
    warm_start_max_flow,
)

__version__ = "0.1.0"
