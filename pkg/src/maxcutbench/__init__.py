"""Resource-matched benchmarking of CVaR-VQE, uniform sampling, and
greedy local search on GW-normalized Max-Cut instances."""

__version__ = "0.1.0"

from .config import ExperimentConfig, load_config
from .cobyla import CobylaSession, session_start
from .exact import gray_code_maximum
from .experiment import emit_tables, run_experiment
from .graphs import (
    WeightedGraph,
    all_flip_deltas,
    batch_reduced_objective,
    flip_delta,
    generate_graph,
    raw_objective,
    reduced_objective,
)
from .gw import gw_normalizer
from .instances import (
    ExactSolution,
    MaxCutInstance,
    build_instance,
    read_instance_record,
    solve_exact,
    write_instance_record,
)
from .mps import (
    CircuitLayout,
    MpsCircuitState,
    apply_circuit,
    build_layout,
    exact_probability,
    sample,
    wrap_angles,
)
from .seeding import derive_seed, derive_stream, make_label
from .solvers import (
    Budget,
    InitialPoint,
    RunTrajectory,
    cvar_cost,
    draw_initial_point,
    run_greedy,
    run_sampling,
    run_vqe,
)
from .stats import (
    BinnedCorrelation,
    SummaryStatistics,
    approximation_ratio,
    binned_correlation,
    difference_curve,
    max_advantage,
    mean_sem,
    prob_better,
    success_probability,
    wilson_interval,
)

__all__ = [
    "__version__",
    "ExperimentConfig",
    "load_config",
    "CobylaSession",
    "session_start",
    "gray_code_maximum",
    "emit_tables",
    "run_experiment",
    "WeightedGraph",
    "all_flip_deltas",
    "batch_reduced_objective",
    "flip_delta",
    "generate_graph",
    "raw_objective",
    "reduced_objective",
    "gw_normalizer",
    "ExactSolution",
    "MaxCutInstance",
    "build_instance",
    "read_instance_record",
    "solve_exact",
    "write_instance_record",
    "CircuitLayout",
    "MpsCircuitState",
    "apply_circuit",
    "build_layout",
    "exact_probability",
    "sample",
    "wrap_angles",
    "derive_seed",
    "derive_stream",
    "make_label",
    "Budget",
    "InitialPoint",
    "RunTrajectory",
    "cvar_cost",
    "draw_initial_point",
    "run_greedy",
    "run_sampling",
    "run_vqe",
    "BinnedCorrelation",
    "SummaryStatistics",
    "approximation_ratio",
    "binned_correlation",
    "difference_curve",
    "max_advantage",
    "mean_sem",
    "prob_better",
    "success_probability",
    "wilson_interval",
]
