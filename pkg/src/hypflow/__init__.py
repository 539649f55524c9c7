"""Numerical laboratory for conformal Ricci flow on the Poincare disc.

The flow of an almost-hyperbolic metric g = e^{2v} h is integrated
radially, trapped between explicit barrier flows, and observed through
its rescaled center Gauss curvature; control-time sweeps measure how long
the curvature stays pinched as the ball radius grows.
"""

from .barriers import (
    BarrierParams,
    barrier_profile,
    check_sandwich_conditions,
    compute_barrier_params,
    lower_barrier_value,
    shrink_length,
    upper_barrier_value,
)
from .curvature import ControlTime, CurvatureTrace, control_time, gauss_curvature, rescaled_center_trace
from .errors import (
    CFLError,
    DegenerateSweepDesignError,
    DomainError,
    GenerationError,
    SweepInconclusiveError,
)
from .experiments import (
    GridPolicy,
    RunRecord,
    Scenario,
    SweepResult,
    control_time_sweep,
    fit_exponential,
    generate_initial,
    run_scenario,
)
from .hyperbolic import (
    DiscPoint,
    MobiusMap,
    euclidean_to_hyperbolic_radius,
    hyperbolic_to_euclidean_radius,
    poincare_conformal_factor,
    pullback_conformal_factor,
    tanh_lower_bound_margin,
)
from .schedule import (
    ConstantBundle,
    IterationSchedule,
    build_constants,
    build_schedule,
    gamma_shift,
    rescale_time_map,
    verify_exponential_bounds,
)
from .solver import (
    BoundaryScenario,
    RadialGrid,
    RelativeConformalField,
    Trajectory,
    cfl_limit,
    evolve,
    laplace_beltrami_radial,
    residual_norm,
    step,
)

__version__ = "0.1.0"
