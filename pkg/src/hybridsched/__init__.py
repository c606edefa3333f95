"""Schedulers for hybrid circuit/packet switches with reconfiguration delay."""

from .baselines import StuffedMatrix, bvn_decompose, bvn_schedule, solstice_schedule, stuff
from .core import (
    Matching,
    Schedule,
    ScheduleEntry,
    SchedulerConfig,
    ValidationReport,
    direct_throughput,
    residual_demand,
    schedule_duration,
    threshold,
    validate_demand,
)
from .eclipse import GreedyStepResult, eclipse, greedy_step_binary_search, greedy_step_exact
from .estimators import BvnScheduler, EclipsePlusPlusRouter, EclipseScheduler, SolsticeScheduler
from .exceptions import (
    DimensionMismatch,
    EmptyDemand,
    InfeasibleDemand,
    NotDoublyBalanced,
    NotFittedError,
    SchedulingError,
    SpecMismatch,
    TooLarge,
)
from .harness import ExperimentConfig, ResultRow, export_csv, run_sweep
from .indirect import (
    EclipseppConfig,
    LayeredGraph,
    Path,
    PathAssignment,
    build_layered_graph,
    eclipsepp,
    indirect_throughput,
    reachable_set,
)
from .matching import max_weight_matching, mwm_curve
from .trafficgen import (
    MultiBlockSpec,
    SingleBlockSpec,
    UniformBlockSpec,
    gen_multi_block,
    gen_single_block,
    random_permutation_matrix,
)

__version__ = "0.1.0"
