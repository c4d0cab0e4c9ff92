"""Optimal augmentation of a threatened prey species from a reserve population."""

from .direct import OptimizerConfig, gradient, kkt_residual, objective_of_controls, solve_direct
from .estimators import ModelAOptimizer, ModelBOptimizer
from .exceptions import (
    AugoptError,
    InfeasibleRegimeError,
    LengthMismatchError,
    NotConvergedError,
    ParseError,
    ValidationError,
)
from .fbsm import (
    SweepConfig,
    adjoint_step,
    backward_sweep,
    characterize_control,
    control_derivative,
    hamiltonian_a,
    solve_fbsm,
)
from .model import (
    ModelKind,
    ModelParams,
    ObjectiveParams,
    State,
    Trajectory,
    decay_v,
    growth_u,
    growth_w,
    objective,
    simulate,
    step_model_a,
    step_model_b,
    step_uncontrolled,
)
from .report import emit_csv, emit_report_csv, emit_table, read_trajectory_csv
from .result import AdjointTrajectory, SolveResult
from .scenarios import (
    RunReport,
    ScenarioSpec,
    builtin_scenarios,
    dump_scenario,
    load_scenario,
    run_scenario,
)

__version__ = "0.1.0"
