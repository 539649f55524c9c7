"""Scenario generators and verification campaigns.

A Scenario bundles everything one simulation needs: ball radius, initial
data family, boundary behaviour, horizon, tolerances, and a seed. Running
it produces a RunRecord holding the rescaled center-curvature trace, the
measured control time, and the worst sandwich margin of e^{2v}/(1+2t)
against [1-b, 1+b] over the inner region. Control-time sweeps repeat a
template scenario over a list of radii and fit log T_ctrl against R.

Long runs are integrated in geometrically growing segments so the sample
cadence tracks the current time scale; a run that has already lost
curvature control stops at the end of the segment that detected it.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .barriers import DEFAULT_EPS, barrier_profile, compute_barrier_params
from .curvature import ControlTime, CurvatureTrace, control_time, gauss_curvature
from .errors import (
    DegenerateSweepDesignError,
    DomainError,
    GenerationError,
    SweepInconclusiveError,
)
from .solver import BoundaryScenario, RadialGrid, RelativeConformalField, evolve

__all__ = [
    "INITIAL_KINDS",
    "Scenario",
    "GridPolicy",
    "RunRecord",
    "SweepResult",
    "generate_initial",
    "resolved_boundary",
    "run_scenario",
    "control_time_sweep",
    "fit_exponential",
]

INITIAL_KINDS = (
    "exact_hyperbolic",
    "banded_perturbation",
    "upper_barrier",
    "lower_barrier",
)

# segment schedule for long integrations
_SEGMENT_START = 1.0
_SEGMENT_GROWTH = 2.0
_SEGMENT_SAMPLES = 32
_SHORT_RUN_SAMPLES = 64

_BUMP_WIDTH_RANGE = (1.2, 2.5)
_MAX_BUMPS = 8
_MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class Scenario:
    """One simulation's configuration."""

    name: str
    R: float
    initial_kind: str
    horizon: float
    boundary: BoundaryScenario
    b: float = 0.1
    eps: float = DEFAULT_EPS
    curvature_cap: float = 2.0
    seed: int = 0
    alpha_tol: float = 0.5
    delta: float = 0.0

    def __post_init__(self):
        if self.initial_kind not in INITIAL_KINDS:
            raise DomainError(f"unknown initial kind {self.initial_kind!r}")
        if self.R <= 0.0:
            raise DomainError(f"R must be positive, got {self.R}")
        if self.horizon <= 0.0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if self.initial_kind == "banded_perturbation" and not 0.0 < self.b <= 0.5:
            raise DomainError(f"b must lie in (0, 1/2] for banded data, got {self.b}")
        if self.delta < 0.0:
            raise DomainError("delta must be nonnegative")


@dataclass(frozen=True)
class GridPolicy:
    """How to discretize a scenario radius."""

    dr_target: float = 0.02

    def make_grid(self, R: float) -> RadialGrid:
        n = max(int(round(R / self.dr_target)) + 1, 8)
        return RadialGrid(R_dom=R, n_nodes=n)


@dataclass(frozen=True)
class RunRecord:
    """Everything measured in one run."""

    scenario: Scenario
    trace: CurvatureTrace
    control_time: ControlTime
    sandwich_violation: float
    solver_meta: dict


def _mirrored_bumps(r: np.ndarray, rng: np.random.Generator, R: float) -> np.ndarray:
    """Random smooth radial field: mirrored Gaussian bumps, even at the origin."""
    count = int(rng.integers(2, _MAX_BUMPS + 1))
    f = np.zeros_like(r)
    for _ in range(count):
        center = rng.uniform(0.0, R)
        width = rng.uniform(*_BUMP_WIDTH_RANGE)
        amp = rng.uniform(-1.0, 1.0)
        f += amp * (
            np.exp(-(((r - center) / width) ** 2))
            + np.exp(-(((r + center) / width) ** 2))
        )
    return f


def generate_initial(scenario: Scenario, grid: RadialGrid) -> RelativeConformalField:
    """Initial relative conformal factor for a scenario.

    banded_perturbation draws seeded smooth bumps, rescales them into the
    band [log(1-b)/2, log(1+b)/2], and rejects candidates whose discrete
    Gauss curvature exceeds the cap anywhere, retrying with a sub-seed.
    """
    kind = scenario.initial_kind
    if kind == "exact_hyperbolic":
        return RelativeConformalField(np.zeros(grid.n_nodes), 0.0)
    if kind in ("upper_barrier", "lower_barrier"):
        params = compute_barrier_params(scenario.b, scenario.eps)
        rho = np.tanh(grid.r / 2.0)
        which = "upper" if kind == "upper_barrier" else "lower"
        return RelativeConformalField(barrier_profile(rho, 0.0, params, which), 0.0)

    lo = 0.5 * math.log1p(-scenario.b)
    hi = 0.5 * math.log1p(scenario.b)
    worst_cap = math.inf
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng([scenario.seed, attempt])
        f = _mirrored_bumps(grid.r, rng, scenario.R)
        span = float(f.max() - f.min())
        if span < 1e-12:
            continue
        values = lo + (f - f.min()) * (hi - lo) / span
        field = RelativeConformalField(values, 0.0)
        bound = float(np.max(np.abs(gauss_curvature(field, grid))))
        if bound <= scenario.curvature_cap:
            return field
        worst_cap = min(worst_cap, bound)
    raise GenerationError(
        f"no admissible field in {_MAX_ATTEMPTS} attempts; best curvature bound "
        f"achieved was {worst_cap:.4g} against cap {scenario.curvature_cap}"
    )


def resolved_boundary(scenario: Scenario) -> BoundaryScenario:
    """Boundary with its continuation rate resolved against the initial data.

    hyperbolic_continuation means "continue the exact flow the initial data
    belongs to": rate 1 for the hyperbolic ball and banded data, the
    barrier's own time scale for barrier data.
    """
    boundary = scenario.boundary
    if (
        boundary.kind == "hyperbolic_continuation"
        and scenario.initial_kind in ("upper_barrier", "lower_barrier")
    ):
        params = compute_barrier_params(scenario.b, scenario.eps)
        scale = (
            params.upper_rate_scale
            if scenario.initial_kind == "upper_barrier"
            else params.lower_rate_scale
        )
        return replace(boundary, rate_scale=scale)
    return boundary


def _segments(horizon: float):
    """Yield (t_end, cadence) pairs with geometrically growing segments."""
    if horizon <= _SEGMENT_START:
        yield horizon, horizon / _SHORT_RUN_SAMPLES
        return
    t_prev = 0.0
    t_next = _SEGMENT_START
    while t_prev < horizon:
        t_cur = min(t_next, horizon)
        yield t_cur, (t_cur - t_prev) / _SEGMENT_SAMPLES
        t_prev = t_cur
        t_next *= _SEGMENT_GROWTH


def _sandwich_margin(values: np.ndarray, t: float, b: float, mask: np.ndarray) -> float:
    """Signed distance of e^{2v}/(1+2t) from [1-b, 1+b] over the masked nodes."""
    ratio = np.exp(2.0 * values[mask]) / (1.0 + 2.0 * t)
    return float(min((ratio - (1.0 - b)).min(), ((1.0 + b) - ratio).min()))


def run_scenario(
    scenario: Scenario,
    grid: RadialGrid,
    *,
    inner_radius: float | None = None,
    early_stop: bool = True,
) -> RunRecord:
    """Evolve a scenario and measure its curvature trace and control time.

    The sandwich margin is tracked over r <= inner_radius (default R/2).
    With early_stop the integration ends once the pinch margin has gone
    negative at a sample past the configured delay; censored runs always
    integrate to the full horizon.
    """
    if grid.R_dom != scenario.R:
        raise ValueError(
            f"grid covers [0, {grid.R_dom}] but the scenario radius is {scenario.R}"
        )
    inner = scenario.R / 2.0 if inner_radius is None else inner_radius
    mask = grid.r <= inner + 1e-12
    boundary = resolved_boundary(scenario)

    started = time.perf_counter()
    field = generate_initial(scenario, grid)

    times = [0.0]
    center_K = [float(gauss_curvature(field, grid)[0])]
    sandwich = _sandwich_margin(field.values, 0.0, scenario.b, mask)
    steps = 0
    failed_at: float | None = None

    for seg_end, cadence in _segments(scenario.horizon):
        traj = evolve(field, grid, boundary, t_end=seg_end, sample_every=cadence)
        steps += traj.steps
        crossed = False
        for sample, t in zip(traj.samples[1:], traj.sample_times[1:]):
            t = float(t)
            K0 = float(gauss_curvature(sample, grid)[0])
            times.append(t)
            center_K.append(K0)
            sandwich = min(
                sandwich, _sandwich_margin(sample.values, t, scenario.b, mask)
            )
            if t >= scenario.delta:
                margin = scenario.alpha_tol - abs((1.0 + 2.0 * t) * K0 + 1.0)
                if margin < 0.0:
                    crossed = True
        field = traj.final
        if traj.failed_at is not None:
            failed_at = traj.failed_at
            break
        if early_stop and crossed:
            break

    times_arr = np.array(times)
    center_arr = np.array(center_K)
    rescaled = (1.0 + 2.0 * times_arr) * center_arr
    trace = CurvatureTrace(
        times=times_arr,
        center_K=center_arr,
        center_K_rescaled=rescaled,
        pinch_margin=scenario.alpha_tol - np.abs(rescaled + 1.0),
    )
    horizon_bound = scenario.horizon if failed_at is None else float(times_arr[-1])
    ctrl = control_time(trace, delta=scenario.delta, horizon=horizon_bound)
    meta = {
        "n_nodes": grid.n_nodes,
        "dr": grid.dr,
        "steps": steps,
        "wall_time": time.perf_counter() - started,
        "failed_at": failed_at,
    }
    return RunRecord(
        scenario=scenario,
        trace=trace,
        control_time=ctrl,
        sandwich_violation=sandwich,
        solver_meta=meta,
    )


def fit_exponential(radii, control_times) -> tuple[float, float, float]:
    """Least squares of log(T) against R: returns (slope, intercept, r_squared)."""
    R = np.asarray(radii, dtype=float)
    T = np.asarray(control_times, dtype=float)
    if len(R) < 2 or len(np.unique(R)) < 2:
        raise DegenerateSweepDesignError(
            "need at least two distinct radii with finite control times to fit"
        )
    if np.any(T <= 0.0):
        raise DomainError("control times must be positive for a log fit")
    y = np.log(T)
    slope, intercept = np.polyfit(R, y, 1)
    predicted = slope * R + intercept
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r_squared


@dataclass(frozen=True)
class SweepResult:
    """Per-radius records plus the fitted exponential growth law."""

    records: tuple
    slope: float
    intercept: float
    r_squared: float

    @property
    def radii(self) -> list[float]:
        return [rec.scenario.R for rec in self.records]

    @property
    def control_times(self) -> list[ControlTime]:
        return [rec.control_time for rec in self.records]


def _sweep_worker(args) -> RunRecord:
    scenario, grid_policy = args
    return run_scenario(scenario, grid_policy.make_grid(scenario.R))


def control_time_sweep(
    R_list,
    template: Scenario,
    grid_policy: GridPolicy,
    jobs: int = 1,
) -> SweepResult:
    """Measure control times over a list of radii and fit log T_ctrl vs R.

    Censored runs are kept in the result but excluded from the fit. Runs are
    independent, so they may execute in parallel; results are merged in
    radius-list order either way.
    """
    radii = [float(R) for R in R_list]
    if len(radii) < 3:
        raise DegenerateSweepDesignError(f"need at least 3 radii, got {len(radii)}")
    if len(set(radii)) < 2:
        raise DegenerateSweepDesignError("sweep radii are all identical")
    scenarios = [
        replace(template, name=f"{template.name}-R{R:g}", R=R) for R in radii
    ]
    tasks = [(s, grid_policy) for s in scenarios]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_worker, tasks))
    else:
        records = [_sweep_worker(task) for task in tasks]

    finite = [rec for rec in records if not rec.control_time.censored]
    if not finite:
        raise SweepInconclusiveError(
            "every run was censored at the horizon; raise the horizon and rerun"
        )
    slope, intercept, r_squared = fit_exponential(
        [rec.scenario.R for rec in finite],
        [rec.control_time.value for rec in finite],
    )
    return SweepResult(
        records=tuple(records),
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
    )
