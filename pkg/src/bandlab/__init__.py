"""Traveling chemotactic bands: closed forms, PDE and jump-kernel solvers, checks."""

from ._backend import NAME as BACKEND
from .analytic import (
    Asymptotes,
    BoundPair,
    Profile,
    asymptotics,
    bounds_model2,
    eval_model1,
    eval_model3,
    eval_model4,
    evaluate,
    half_max_width,
    model3_plateau,
    normalization,
    profile_derivatives,
    umax_model1,
)
from .errors import *  # noqa: F401,F403
from .kernel import KernelSpec, build_kernel, compare_to_pde, kernel_step, run_kernel
from .params import ModelKind, ModelParams, derive_params, dump_params, load_params
from .pde import FieldState, Grid1D, SolverConfig, init_state, measure_front_speed, run, step, traveling_grid
from .verify import (
    CheckResult,
    VerifyReport,
    check_bounds,
    convergence_order,
    max_ln_v_curvature,
    ode_residual,
    run_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
