"""Feasible-region geometry and Pareto-front exploration for linear MTL."""

__version__ = "0.1.0"

from .conditions import (
    ConditionReport,
    brute_force_condition,
    check_c1,
    check_c2,
    estimate_c1_probability,
)
from .data import TaskDataset, load_dataset
from .fixtures import (
    equiangular_frame,
    make_three_task_dataset,
    write_fixture_csv,
)
from .explorer import (
    SweepResult,
    distance_to_point,
    randomized_combination,
    run_randomized_sweep,
    run_sweep,
    sample_simplex_weights,
)
from .predictors import (
    OptimalPredictors,
    ScalarizationSolution,
    WeightVector,
    compute_optimal_predictors,
    irreducible_losses,
    scalarization_optimum,
    train_scalarized_gd,
)
from .smto import (
    LinearMTLNet,
    MinNormResult,
    SMTOTrace,
    Variant,
    min_norm_element,
    run_mgda,
    task_gradients_full,
    task_gradients_rep,
)
from .surfaces import (
    FeasiblePoint,
    SignPattern,
    SurfaceId,
    SurfaceKind,
    classify_point,
    enumerate_surfaces,
    pareto_filter,
    sample_feasible_region,
    surface_residual,
    triple_intersection_k3,
)

__all__ = [
    "ConditionReport",
    "FeasiblePoint",
    "LinearMTLNet",
    "MinNormResult",
    "OptimalPredictors",
    "SMTOTrace",
    "ScalarizationSolution",
    "SignPattern",
    "SurfaceId",
    "SurfaceKind",
    "SweepResult",
    "TaskDataset",
    "Variant",
    "WeightVector",
    "brute_force_condition",
    "check_c1",
    "check_c2",
    "classify_point",
    "compute_optimal_predictors",
    "distance_to_point",
    "enumerate_surfaces",
    "equiangular_frame",
    "estimate_c1_probability",
    "irreducible_losses",
    "load_dataset",
    "make_three_task_dataset",
    "min_norm_element",
    "pareto_filter",
    "randomized_combination",
    "run_mgda",
    "run_randomized_sweep",
    "run_sweep",
    "sample_feasible_region",
    "sample_simplex_weights",
    "scalarization_optimum",
    "surface_residual",
    "task_gradients_full",
    "task_gradients_rep",
    "train_scalarized_gd",
    "triple_intersection_k3",
    "write_fixture_csv",
]
